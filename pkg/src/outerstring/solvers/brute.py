"""Exhaustive oracles for every problem, independent of the decomposition DP."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

from ..errors import SizeLimitExceeded
from ..graphcore import Graph
from .problems import (
    DECISION,
    Problem,
    Solution,
    as_problem,
    infeasible,
    is_dominating,
    is_forest,
    is_independent,
    is_vertex_cover,
    make_solution,
)

SUBSET_CAP = 16
SMALL_CAP = 12


def brute_force(problem: str | Problem, g: Graph, **kw) -> Solution:
    prob = as_problem(problem, **kw)
    name = prob.name
    cap = SMALL_CAP if name in ("CyclePacking", "InducedMatching") else SUBSET_CAP
    if g.n > cap:
        raise SizeLimitExceeded(f"brute force for {name} is limited to {cap} vertices")
    if name == "IndependentSet":
        return _largest(name, g, lambda s: is_independent(g, s))
    if name == "VertexCover":
        return _smallest(name, g, lambda s: is_vertex_cover(g, s))
    if name == "DominatingSet":
        return _smallest(name, g, lambda s: is_dominating(g, s))
    if name == "FeedbackVertexSet":
        return _smallest(name, g, lambda s: is_forest(g, frozenset(s)))
    if name in DECISION:
        return _colour(prob, g)
    if name == "InducedMatching":
        return _induced_matching(g)
    return _cycle_packing(g)


def _smallest(name: str, g: Graph, ok) -> Solution:
    for r in range(g.n + 1):
        for s in combinations(range(g.n), r):
            if ok(s):
                return make_solution(name, s)
    return infeasible(name)  # pragma: no cover - the full set always qualifies


def _largest(name: str, g: Graph, ok) -> Solution:
    for r in range(g.n, -1, -1):
        for s in combinations(range(g.n), r):
            if ok(s):
                return make_solution(name, s)
    return infeasible(name)  # pragma: no cover


def _colour(prob: Problem, g: Graph) -> Solution:
    lists = prob.lists_for(g)
    colour: dict[int, int] = {}

    def place(v: int) -> bool:
        if v == g.n:
            return True
        for c in sorted(lists[v]):
            if all(colour.get(w) != c for w in g.adj[v]):
                colour[v] = c
                if place(v + 1):
                    return True
                del colour[v]
        return False

    return make_solution(prob.name, colour) if place(0) else infeasible(prob.name)


def _induced_matching(g: Graph) -> Solution:
    """Largest vertex set whose induced subgraph is a perfect matching."""
    best: list[tuple[int, int]] = []
    for mask in range(1 << g.n):
        vs = [v for v in range(g.n) if mask >> v & 1]
        if len(vs) % 2 or len(vs) <= 2 * len(best):
            continue
        inside = {v: [w for w in g.adj[v] if mask >> w & 1] for v in vs}
        if all(len(x) == 1 for x in inside.values()):
            best = sorted({(min(v, x[0]), max(v, x[0])) for v, x in inside.items()})
    return make_solution("InducedMatching", best)


def _cycle_packing(g: Graph) -> Solution:
    """Max packing of vertex sets that induce a single cycle.

    Any cycle contains the vertex set of a chordless one, so packing
    chordless cycles loses nothing.
    """
    holes: dict[int, list[int]] = {}
    for mask in range(1 << g.n):
        vs = [v for v in range(g.n) if mask >> v & 1]
        if len(vs) < 3:
            continue
        if all(sum(1 for w in g.adj[v] if mask >> w & 1) == 2 for v in vs) and g.is_connected_set(vs):
            holes.setdefault(vs[0], []).append(mask)

    @lru_cache(maxsize=None)
    def best(mask: int) -> tuple[int, tuple[int, ...]]:
        if not mask:
            return 0, ()
        low = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << low)
        out = best(rest)
        for h in holes.get(low, ()):
            if h & mask == h:
                val, used = best(mask & ~h)
                if val + 1 > out[0]:
                    out = (val + 1, (h,) + used)
        return out

    _, masks = best((1 << g.n) - 1)
    cycles = []
    for h in masks:
        vs = [v for v in range(g.n) if h >> v & 1]
        cyc = [vs[0]]
        prev = -1
        while True:
            cur = cyc[-1]
            nxt = min(w for w in g.adj[cur] if h >> w & 1 and w != prev)
            if nxt == cyc[0]:
                break
            prev = cur
            cyc.append(nxt)
        cycles.append(tuple(cyc))
    return make_solution("CyclePacking", cycles)
