"""Intersection graphs, sparsity measures and clique-minor search."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from .errors import DegenerateInput, ParseError, SizeLimitExceeded
from .geom import Instance, Kind, candidate_pairs, segment_intersection, validate_general_position


@dataclass
class Graph:
    """Simple undirected graph on vertices 0..n-1."""

    n: int
    adj: list[set[int]] = field(default_factory=list)
    string_ids: list[str] | None = None

    def __post_init__(self):
        if not self.adj:
            self.adj = [set() for _ in range(self.n)]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], string_ids=None) -> "Graph":
        g = cls(n, string_ids=string_ids)
        for u, v in edges:
            g.add_edge(u, v)
        return g

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError("self-loops are not allowed")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError(f"edge ({u}, {v}) out of range")
        self.adj[u].add(v)
        self.adj[v].add(u)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in sorted(self.adj[u]) if u < v]

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def induced(self, keep: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph, relabelled 0..k-1, plus the map back to old ids."""
        old = sorted(set(keep))
        new = {v: i for i, v in enumerate(old)}
        g = Graph(len(old))
        for v in old:
            for w in self.adj[v]:
                if w in new and v < w:
                    g.add_edge(new[v], new[w])
        return g, old

    def is_connected_set(self, vs: Iterable[int]) -> bool:
        vs = set(vs)
        if not vs:
            return False
        start = next(iter(vs))
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in self.adj[v]:
                if w in vs and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen == vs

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        out = []
        for s in range(self.n):
            if seen[s]:
                continue
            comp = [s]
            seen[s] = True
            stack = [s]
            while stack:
                v = stack.pop()
                for w in self.adj[v]:
                    if not seen[w]:
                        seen[w] = True
                        comp.append(w)
                        stack.append(w)
            out.append(sorted(comp))
        return out

    def to_json(self) -> dict:
        out: dict = {"n": self.n, "edges": [list(e) for e in self.edges]}
        if self.string_ids is not None:
            out["stringIds"] = list(self.string_ids)
        return out

    @classmethod
    def from_json(cls, obj) -> "Graph":
        if not isinstance(obj, dict) or "n" not in obj or "edges" not in obj:
            raise ParseError('graph JSON needs "n" and "edges"')
        try:
            n = int(obj["n"])
            return cls.from_edges(n, [(int(u), int(v)) for u, v in obj["edges"]], obj.get("stringIds"))
        except (TypeError, ValueError) as exc:
            raise ParseError(f"bad graph JSON: {exc}") from exc


def load_graph(path) -> Graph:
    try:
        with open(path) as fh:
            return Graph.from_json(json.load(fh))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc


# --------------------------------------------------------------------------
# small named graphs, used by tests and the CLI
# --------------------------------------------------------------------------


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2))


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def grid_graph(rows: int, cols: int) -> Graph:
    g = Graph(rows * cols)
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                g.add_edge(v, v + 1)
            if r + 1 < rows:
                g.add_edge(v, v + cols)
    return g


def random_graph(n: int, p: float, rng) -> Graph:
    return Graph.from_edges(n, [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p])


# --------------------------------------------------------------------------
# intersection graph
# --------------------------------------------------------------------------


def intersection_graph(inst: Instance) -> Graph:
    """Vertex i is string i; edges join strings that cross."""
    bad = validate_general_position(inst)
    if bad:
        raise DegenerateInput(bad)
    g = Graph(len(inst), string_ids=inst.ids)
    for (ci, _, s), (cj, _, t) in candidate_pairs(inst.strings):
        if not g.has_edge(ci, cj) and segment_intersection(s, t).kind is Kind.PROPER:
            g.add_edge(ci, cj)
    return g


# --------------------------------------------------------------------------
# sparsity
# --------------------------------------------------------------------------


def degeneracy(g: Graph) -> tuple[int, list[int]]:
    """Max over the min-degree peeling of the current minimum degree.

    Ties are broken by the lowest vertex index.
    """
    deg = [len(a) for a in g.adj]
    removed = [False] * g.n
    buckets: dict[int, set[int]] = {}
    for v, d in enumerate(deg):
        buckets.setdefault(d, set()).add(v)
    order, best = [], 0
    for _ in range(g.n):
        d = min(k for k, b in buckets.items() if b)
        v = min(buckets[d])
        buckets[d].discard(v)
        removed[v] = True
        order.append(v)
        best = max(best, d)
        for w in g.adj[v]:
            if not removed[w]:
                buckets[deg[w]].discard(w)
                deg[w] -= 1
                buckets.setdefault(deg[w], set()).add(w)
    return best, order


def _violates(g: Graph, k: int) -> bool:
    """Is there a vertex set H with |E(H)| > k (|H| - 1)?

    For each forced vertex v, a max-closure network (edges as projects
    worth 1, vertices costing k, v free) gives
    max_{H containing v} |E(H)| - k(|H| - 1) = m - mincut.
    """
    edges = g.edges
    m = len(edges)
    if m == 0:
        return False
    n = g.n
    src, sink = 0, 1
    enode = 2
    vnode = 2 + m
    size = 2 + m + n
    big = m + 1
    rows, cols, caps = [], [], []
    for i, (u, v) in enumerate(edges):
        rows += [src, enode + i, enode + i]
        cols += [enode + i, vnode + u, vnode + v]
        caps += [1, big, big]
    base_rows, base_cols, base_caps = list(rows), list(cols), list(caps)
    touched = sorted({x for e in edges for x in e})
    for forced in touched:
        rows, cols, caps = list(base_rows), list(base_cols), list(base_caps)
        for u in touched:
            if u != forced:
                rows.append(vnode + u)
                cols.append(sink)
                caps.append(k)
        mat = csr_matrix((np.array(caps, dtype=np.int32), (rows, cols)), shape=(size, size))
        cut = maximum_flow(mat, src, sink).flow_value
        if m - cut > 0:
            return True
    return False


def arboricity(g: Graph) -> int:
    """Exact Nash-Williams arboricity max_H ceil(|E(H)| / (|V(H)| - 1))."""
    if g.m == 0:
        return 0
    k = max(1, math.ceil(g.m / (g.n - 1)))
    while _violates(g, k):
        k += 1
    return k


def arboricity_bruteforce(g: Graph) -> int:
    """Oracle over all vertex subsets (small graphs only)."""
    if g.n > 16:
        raise SizeLimitExceeded("brute-force arboricity is limited to 16 vertices")
    best = 0
    for r in range(2, g.n + 1):
        for sub in combinations(range(g.n), r):
            s = set(sub)
            e = sum(1 for v in sub for w in g.adj[v] if w in s) // 2
            best = max(best, -(-e // (r - 1)))
    return best


def find_biclique(g: Graph, t: int, max_steps: int | None = None) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Lexicographically first K_{t,t} subgraph (A, B) with A < B elementwise-first, or None.

    A is the lexicographically smallest t-set with at least t common
    neighbours outside it; B is the t smallest of those neighbours.
    ``max_steps`` bounds the number of search nodes; exceeding it raises
    SizeLimitExceeded, which keeps budgeted searches deterministic.
    """
    if t < 1:
        raise ValueError("t must be at least 1")
    cand = [v for v in range(g.n) if len(g.adj[v]) >= t]
    steps = [0]

    def extend(start: int, chosen: list[int], common: set[int]):
        steps[0] += 1
        if max_steps is not None and steps[0] > max_steps:
            raise SizeLimitExceeded(f"biclique search exceeded {max_steps} steps")
        if len(chosen) == t:
            rest = sorted(common - set(chosen))
            if len(rest) >= t:
                return tuple(chosen), tuple(rest[:t])
            return None
        for idx in range(start, len(cand)):
            v = cand[idx]
            nc = common & g.adj[v] if chosen else set(g.adj[v])
            # common neighbours may still include later picks, hence the slack
            if len(nc - set(chosen)) < t:
                continue
            res = extend(idx + 1, chosen + [v], nc)
            if res:
                return res
        return None

    return extend(0, [], set())


def find_biclique_bruteforce(g: Graph, t: int):
    """Oracle: scan every pair of disjoint t-sets."""
    for a in combinations(range(g.n), t):
        rest = [v for v in range(g.n) if v not in a]
        for b in combinations(rest, t):
            if all(y in g.adj[x] for x in a for y in b):
                return a, b
    return None


def max_biclique_size(g: Graph, limit: int | None = None) -> int:
    """Largest t with a K_{t,t} subgraph (search capped by ``limit``)."""
    t = 0
    top = limit if limit is not None else g.n // 2
    while t < top and find_biclique(g, t + 1) is not None:
        t += 1
    return t


# --------------------------------------------------------------------------
# clique minors
# --------------------------------------------------------------------------

MinorModel = Mapping[int, frozenset]


def verify_minor_model(g: Graph, model: MinorModel) -> bool:
    """Branch sets nonempty, disjoint, connected and pairwise adjacent."""
    sets = [frozenset(model[k]) for k in sorted(model)]
    seen: set[int] = set()
    for s in sets:
        if not s or seen & s or any(not (0 <= v < g.n) for v in s):
            return False
        seen |= s
        if not g.is_connected_set(s):
            return False
    for a, b in combinations(sets, 2):
        if not any(g.adj[v] & b for v in a):
            return False
    return True


MINOR_VERTEX_CAP = 20


def find_clique_minor(g: Graph, h: int, cap: int = MINOR_VERTEX_CAP) -> dict[int, frozenset] | None:
    """Exact search for a K_h minor model.

    Branches on the lowest-degree undecided node: delete it, contract it
    into a neighbour, or freeze it as a finished branch set. Frozen sets
    must stay pairwise adjacent; memoised on the current partition.
    """
    if h < 1:
        raise ValueError("h must be at least 1")
    if g.n > cap:
        raise SizeLimitExceeded(f"clique-minor search is capped at {cap} vertices, got {g.n}")
    if h == 1:
        return {0: frozenset([0])} if g.n else None
    if g.n < h or g.m < h * (h - 1) // 2:
        return None

    # node id -> member set, adjacency between nodes
    start_nodes = {v: frozenset([v]) for v in range(g.n)}
    start_adj = {v: set(g.adj[v]) for v in range(g.n)}
    seen: set = set()

    def clique_in(nodes, adj, frozen):
        # a K_h among current nodes that contains every frozen node
        need = h - len(frozen)
        pool = [v for v in nodes if v not in frozen and all(v in adj[f] for f in frozen)]
        if need == 0:
            return list(frozen)
        pool = [v for v in pool if len(adj[v]) >= h - 1]

        def grow(chosen, cands):
            if len(chosen) == need:
                return chosen
            for i, v in enumerate(cands):
                rest = [w for w in cands[i + 1:] if w in adj[v]]
                if len(chosen) + 1 + len(rest) < need:
                    continue
                res = grow(chosen + [v], rest)
                if res:
                    return res
            return None

        got = grow([], sorted(pool))
        return list(frozen) + got if got is not None else None

    def search(nodes, adj, frozen):
        key = (frozenset(nodes.values()), frozenset(nodes[f] for f in frozen))
        if key in seen:
            return None
        seen.add(key)
        if len(nodes) < h:
            return None
        hit = clique_in(nodes, adj, frozen)
        if hit is not None:
            return {i: nodes[v] for i, v in enumerate(sorted(hit, key=lambda v: min(nodes[v])))}
        if len(nodes) == h:
            return None
        # frozen nodes must keep enough neighbours to reach every other branch set
        for f in frozen:
            if len(adj[f]) < h - 1:
                return None
        free = [v for v in nodes if v not in frozen]
        if not free:
            return None
        u = min(free, key=lambda v: (len(adj[v]), min(nodes[v])))
        # delete u
        res = search(*_delete(nodes, adj, u), frozen)
        if res:
            return res
        # contract u into a free neighbour (never into a frozen set)
        for w in sorted(adj[u], key=lambda v: min(nodes[v])):
            if w in frozen:
                continue
            res = search(*_contract(nodes, adj, u, w), frozen)
            if res:
                return res
        # freeze u as a final branch set
        if len(adj[u]) >= h - 1 and len(frozen) < h and all(u in adj[f] for f in frozen):
            res = search(nodes, adj, frozen | {u})
            if res:
                return res
        return None

    return search(start_nodes, start_adj, frozenset())


def _delete(nodes, adj, u):
    nodes = {k: v for k, v in nodes.items() if k != u}
    new_adj = {k: (a - {u}) for k, a in adj.items() if k != u}
    return nodes, new_adj


def _contract(nodes, adj, u, w):
    nodes = dict(nodes)
    nodes[w] = nodes[w] | nodes.pop(u)
    new_adj = {k: set(a) for k, a in adj.items() if k != u}
    for x in adj[u]:
        if x != w:
            new_adj[x].discard(u)
            new_adj[x].add(w)
            new_adj[w].add(x)
    new_adj[w].discard(u)
    new_adj[w].discard(w)
    return nodes, new_adj


def greedy_clique_minor(g: Graph) -> dict[int, frozenset]:
    """Heuristic lower-bound witness for graphs above the exact cap.

    Repeatedly contracts a min-degree vertex into the neighbour sharing
    the fewest neighbours with it, remembering the largest clique of
    contracted nodes seen along the way.
    """
    nodes = {v: frozenset([v]) for v in range(g.n)}
    adj = {v: set(g.adj[v]) for v in range(g.n)}
    best: dict[int, frozenset] = {0: frozenset([0])} if g.n else {}
    while nodes:
        clique = _greedy_clique(adj)
        if len(clique) > len(best):
            best = {i: nodes[v] for i, v in enumerate(clique)}
        u = min(nodes, key=lambda v: (len(adj[v]), v))
        if not adj[u]:
            nodes, adj = _delete(nodes, adj, u)
            continue
        w = min(adj[u], key=lambda x: (len(adj[u] & adj[x]), x))
        nodes, adj = _contract(nodes, adj, u, w)
    return best


def _greedy_clique(adj) -> list[int]:
    best: list[int] = []
    for v in sorted(adj, key=lambda x: -len(adj[x])):
        clique = [v]
        for w in sorted(adj[v], key=lambda x: -len(adj[x])):
            if all(w in adj[c] for c in clique):
                clique.append(w)
        if len(clique) > len(best):
            best = clique
    return best


def minor_from_json(obj) -> dict[int, frozenset]:
    try:
        sets = obj["branchSets"] if isinstance(obj, dict) else obj
        if isinstance(sets, dict):
            return {int(k): frozenset(int(v) for v in vs) for k, vs in sets.items()}
        return {i: frozenset(int(v) for v in vs) for i, vs in enumerate(sets)}
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad minor model JSON: {exc}") from exc


def minor_to_json(model: MinorModel) -> dict:
    return {"branchSets": {str(k): sorted(model[k]) for k in sorted(model)}}
