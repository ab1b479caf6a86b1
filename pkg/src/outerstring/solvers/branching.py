"""Biclique-branching solvers, the cycle-packing approximation and greedy colouring."""

from __future__ import annotations

import math
from collections import deque

from ..graphcore import Graph, degeneracy, find_biclique
from ..treewidth import treewidth_heuristic
from .problems import Problem, Solution, infeasible, make_solution
from .tddp import WIDTH_CAP, cycles_from_edges, solve_td


def _sub(g: Graph, alive) -> tuple[Graph, list[int]]:
    return g.induced(alive)


def _solve_leaf(problem: Problem | str, g: Graph, alive, cap: int) -> Solution:
    """Solve on the induced subgraph and translate the payload back to g's labels."""
    h, back = _sub(g, alive)
    sol = solve_td(problem, h, treewidth_heuristic(h), cap=cap)
    if not sol.feasible:
        return sol
    if sol.kind == "vertex set":
        return make_solution(sol.problem, [back[v] for v in sol.payload])
    if sol.kind == "edge set":
        return make_solution(sol.problem, [(back[u], back[v]) for u, v in sol.payload])
    if sol.kind == "cycle set":
        return make_solution(sol.problem, [tuple(back[v] for v in c) for c in sol.payload])
    return make_solution(sol.problem, {back[v]: c for v, c in sol.payload.items()})


def _biclique_in(g: Graph, alive: frozenset, t: int):
    h, back = _sub(g, alive)
    hit = find_biclique(h, t)
    if hit is None:
        return None
    a, b = hit
    return [back[v] for v in a], [back[v] for v in b]


# --------------------------------------------------------------------------
# vertex cover
# --------------------------------------------------------------------------


def vc_branch(g: Graph, k: int, cap: int = WIDTH_CAP) -> Solution:
    """Vertex cover of size <= k, or infeasible.

    High-degree kernel, then branch on a K_{t,t} with t = ceil(sqrt k):
    every cover contains one whole side. Biclique-free leaves go to the
    decomposition DP.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    stats = {"nodes": 0}
    cover = _vc(g, frozenset(range(g.n)), k, cap, stats)
    if cover is None:
        sol = infeasible("VertexCover")
    else:
        sol = make_solution("VertexCover", cover)
    sol.meta.update(stats, k=k)
    return sol


def _vc(g: Graph, alive: frozenset, k: int, cap: int, stats) -> set[int] | None:
    stats["nodes"] += 1
    forced: set[int] = set()
    changed = True
    while changed:
        changed = False
        for v in sorted(alive):
            if len(g.adj[v] & alive) > k:
                forced.add(v)
                alive = alive - {v}
                k -= 1
                changed = True
                if k < 0:
                    return None
    alive = frozenset(v for v in alive if g.adj[v] & alive)
    edges = sum(len(g.adj[v] & alive) for v in alive) // 2
    if edges == 0:
        return forced
    if edges > k * k:
        return None
    t = math.isqrt(k - 1) + 1 if k > 0 else 0
    hit = _biclique_in(g, alive, t) if t >= 1 else None
    if hit is not None:
        for side in hit:
            if k - t >= 0:
                rest = _vc(g, alive - set(side), k - t, cap, stats)
                if rest is not None:
                    return forced | set(side) | rest
        return None
    sol = _solve_leaf("VertexCover", g, alive, cap)
    if sol.value <= k:
        return forced | set(sol.payload)
    return None


# --------------------------------------------------------------------------
# feedback vertex set
# --------------------------------------------------------------------------


def fvs_branch(g: Graph, k: int, cap: int = WIDTH_CAP) -> Solution:
    """Feedback vertex set of size <= k, or infeasible.

    On a K_{t,t} (t = max(2, ceil(sqrt k))) some side loses all but one
    vertex, giving 2t children with budget k - (t - 1).
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    stats = {"nodes": 0}
    got = _fvs(g, frozenset(range(g.n)), k, cap, stats)
    sol = infeasible("FeedbackVertexSet") if got is None else make_solution("FeedbackVertexSet", got)
    sol.meta.update(stats, k=k)
    return sol


def _prune_low_degree(g: Graph, alive: frozenset) -> frozenset:
    alive = set(alive)
    queue = deque(v for v in alive if len(g.adj[v] & alive) <= 1)
    while queue:
        v = queue.popleft()
        if v not in alive:
            continue
        alive.discard(v)
        for w in g.adj[v] & alive:
            if len(g.adj[w] & alive) <= 1:
                queue.append(w)
    return frozenset(alive)


def _fvs(g: Graph, alive: frozenset, k: int, cap: int, stats) -> set[int] | None:
    stats["nodes"] += 1
    alive = _prune_low_degree(g, alive)
    if not alive:
        return set()
    if k == 0:
        return None
    t = max(2, math.isqrt(k - 1) + 1)
    hit = _biclique_in(g, alive, t)
    if hit is not None:
        if k - (t - 1) < 0:
            return None
        for side in hit:
            for keep in side:
                drop = set(side) - {keep}
                rest = _fvs(g, alive - drop, k - (t - 1), cap, stats)
                if rest is not None:
                    return drop | rest
        return None
    sol = _solve_leaf("FeedbackVertexSet", g, alive, cap)
    return set(sol.payload) if sol.value <= k else None


# --------------------------------------------------------------------------
# induced matching
# --------------------------------------------------------------------------


def induced_matching_branch(g: Graph, cap: int = WIDTH_CAP) -> Solution:
    """Maximum induced matching by branching on K_{t,t}, t = max(2, ceil(sqrt n)).

    At most one matching edge touches A and B together, so the children
    drop A, drop B, or keep a single pair u in A, v in B.
    """
    t = max(2, math.isqrt(max(g.n, 1) - 1) + 1)
    stats = {"nodes": 0}
    best = _im(g, frozenset(range(g.n)), t, cap, stats)
    sol = make_solution("InducedMatching", best)
    sol.meta.update(stats, t=t)
    return sol


def _im(g: Graph, alive: frozenset, t: int, cap: int, stats) -> list[tuple[int, int]]:
    stats["nodes"] += 1
    hit = _biclique_in(g, alive, t)
    if hit is None:
        return list(_solve_leaf("InducedMatching", g, alive, cap).payload)
    a, b = hit
    children = [alive - set(a), alive - set(b)]
    base = alive - set(a) - set(b)
    children += [base | {u, v} for u in a for v in b]
    best: list[tuple[int, int]] = []
    for child in children:
        got = _im(g, child, t, cap, stats)
        if len(got) > len(best):
            best = got
    return best


# --------------------------------------------------------------------------
# list 3-colouring
# --------------------------------------------------------------------------


def list3_branch(g: Graph, lists=None, cap: int = WIDTH_CAP) -> Solution:
    """List 3-colouring by branching on K_{t,t}, t = max(2, ceil(sqrt n)).

    With three colours one side of the biclique is monochrome. The child
    for "A gets colour i" needs A independent and i allowed on all of A;
    it deletes A and removes i from the lists of A's other neighbours.
    """
    prob = Problem("List3Coloring", lists=tuple(frozenset(f) for f in lists) if lists is not None else None)
    start = prob.lists_for(g)
    t = max(2, math.isqrt(max(g.n, 1) - 1) + 1)
    stats = {"nodes": 0}
    got = _l3(g, frozenset(range(g.n)), {v: frozenset(start[v]) for v in range(g.n)}, t, cap, stats)
    sol = infeasible("List3Coloring") if got is None else make_solution("List3Coloring", got)
    sol.meta.update(stats, t=t)
    return sol


def _l3(g: Graph, alive: frozenset, lists: dict, t: int, cap: int, stats) -> dict[int, int] | None:
    stats["nodes"] += 1
    if any(not lists[v] for v in alive):
        return None
    hit = _biclique_in(g, alive, t)
    if hit is None:
        h, back = g.induced(alive)
        local = tuple(lists[v] for v in back)
        sol = solve_td(Problem("List3Coloring", lists=local), h, treewidth_heuristic(h), cap=cap)
        if not sol.feasible:
            return None
        return {back[v]: c for v, c in sol.payload.items()}
    for side in hit:
        s = set(side)
        if any(g.adj[v] & s for v in s):
            continue
        for i in (1, 2, 3):
            if not all(i in lists[v] for v in s):
                continue
            rest = alive - s
            nbrs = set().union(*(g.adj[v] for v in s)) & rest
            child = {v: (lists[v] - {i} if v in nbrs else lists[v]) for v in rest}
            got = _l3(g, rest, child, t, cap, stats)
            if got is not None:
                got.update({v: i for v in s})
                return got
    return None


# --------------------------------------------------------------------------
# cycle packing
# --------------------------------------------------------------------------


def shortest_cycle(g: Graph, alive) -> list[int] | None:
    """A shortest cycle inside ``alive`` (lowest start vertex on ties), by BFS from every vertex."""
    alive = set(alive)
    best: list[int] | None = None
    for s in sorted(alive):
        dist = {s: 0}
        parent = {s: -1}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            if best is not None and 2 * dist[u] + 1 >= len(best):
                break
            for w in sorted(g.adj[u] & alive):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif w != parent[u] and dist[w] >= dist[u]:
                    cyc = _splice(parent, u, w)
                    if cyc is not None and (best is None or len(cyc) < len(best)):
                        best = cyc
    return best


def _splice(parent: dict, u: int, w: int) -> list[int] | None:
    pu, pw = [u], [w]
    while parent[pu[-1]] != -1:
        pu.append(parent[pu[-1]])
    while parent[pw[-1]] != -1:
        pw.append(parent[pw[-1]])
    # drop the shared tail back to the root, keep the meeting vertex once
    while len(pu) > 1 and len(pw) > 1 and pu[-2] == pw[-2]:
        pu.pop()
        pw.pop()
    if pu[-1] != pw[-1]:
        return None
    cyc = list(reversed(pu)) + pw[:-1]
    return cyc if len(set(cyc)) == len(cyc) and len(cyc) >= 3 else None


def cycle_packing_4approx(g: Graph, cap: int = WIDTH_CAP) -> Solution:
    """Strip cycles of length <= 4 greedily, then pack the rest exactly.

    The remainder has girth at least 5, hence no K_{2,2}.
    """
    alive = set(range(g.n))
    short: list[tuple[int, ...]] = []
    while True:
        cyc = shortest_cycle(g, alive)
        if cyc is None or len(cyc) > 4:
            break
        short.append(tuple(cyc))
        alive -= set(cyc)
    rest = _solve_leaf("CyclePacking", g, frozenset(alive), cap)
    sol = make_solution("CyclePacking", short + list(rest.payload))
    sol.meta.update(stripped=len(short), remainder=sorted(alive))
    return sol


def greedy_color(g: Graph) -> dict[int, int]:
    """Colour vertices in reverse peeling order with the smallest free colour (1-based)."""
    _, order = degeneracy(g)
    colour: dict[int, int] = {}
    for v in reversed(order):
        used = {colour[w] for w in g.adj[v] if w in colour}
        c = 1
        while c in used:
            c += 1
        colour[v] = c
    return colour


__all__ = [
    "cycle_packing_4approx",
    "cycles_from_edges",
    "fvs_branch",
    "greedy_color",
    "induced_matching_branch",
    "list3_branch",
    "shortest_cycle",
    "vc_branch",
]
