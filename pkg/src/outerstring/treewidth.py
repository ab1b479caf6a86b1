"""Tree decompositions: validation, min-fill heuristic and exact treewidth."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import permutations

from .errors import ParseError, SizeLimitExceeded
from .graphcore import Graph

EXACT_CAP = 25
BRANCH_BOUND_CAP = 16


@dataclass
class TreeDecomposition:
    nodes: list[int]
    edges: list[tuple[int, int]]
    bags: dict[int, frozenset[int]]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1

    def neighbours(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {a: [] for a in self.nodes}
        for a, b in self.edges:
            out[a].append(b)
            out[b].append(a)
        return out

    def to_json(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "treeEdges": [list(e) for e in self.edges],
            "bags": {str(a): sorted(self.bags[a]) for a in self.nodes},
        }

    @classmethod
    def from_json(cls, obj) -> "TreeDecomposition":
        try:
            nodes = [int(a) for a in obj["nodes"]]
            edges = [(int(a), int(b)) for a, b in obj["treeEdges"]]
            bags = {int(a): frozenset(int(v) for v in vs) for a, vs in obj["bags"].items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad decomposition JSON: {exc}") from exc
        return cls(nodes, edges, bags)


def load_decomposition(path) -> TreeDecomposition:
    try:
        with open(path) as fh:
            return TreeDecomposition.from_json(json.load(fh))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc


@dataclass
class Validation:
    valid: bool
    width: int
    violations: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.valid


def validate_decomposition(g: Graph, td: TreeDecomposition) -> Validation:
    """Check that the tree is a tree and the three bag axioms hold."""
    bad: list[str] = []
    nodes = set(td.nodes)
    if len(nodes) != len(td.nodes):
        bad.append("duplicate tree node")
    if set(td.bags) != nodes:
        bad.append("bags do not match tree nodes")
    for a, b in td.edges:
        if a not in nodes or b not in nodes:
            bad.append(f"tree edge ({a}, {b}) uses an unknown node")
    if nodes and len(td.edges) != len(nodes) - 1:
        bad.append("tree has the wrong number of edges")
    if nodes and not _connected(nodes, td.edges):
        bad.append("tree is not connected")
    holders: dict[int, set[int]] = {v: set() for v in range(g.n)}
    for a, bag in td.bags.items():
        for v in bag:
            if v not in holders:
                bad.append(f"bag {a} holds unknown vertex {v}")
            else:
                holders[v].add(a)
    for v in range(g.n):
        if not holders[v]:
            bad.append(f"vertex {v} is in no bag")
    for u, v in g.edges:
        if not any(u in bag and v in bag for bag in td.bags.values()):
            bad.append(f"edge ({u}, {v}) is in no bag")
    for v, where in holders.items():
        if len(where) > 1:
            sub = [(a, b) for a, b in td.edges if a in where and b in where]
            if not _connected(where, sub):
                bad.append(f"bags holding vertex {v} are not connected")
    return Validation(not bad, td.width, bad)


def _connected(nodes: set[int], edges) -> bool:
    adj: dict[int, list[int]] = {a: [] for a in nodes}
    for a, b in edges:
        if a in adj and b in adj:
            adj[a].append(b)
            adj[b].append(a)
    start = next(iter(nodes))
    seen = {start}
    stack = [start]
    while stack:
        for b in adj[stack.pop()]:
            if b not in seen:
                seen.add(b)
                stack.append(b)
    return seen == set(nodes)


# --------------------------------------------------------------------------
# elimination orders
# --------------------------------------------------------------------------


def order_width(g: Graph, order: list[int]) -> int:
    adj = [set(a) for a in g.adj]
    width = 0
    for v in order:
        nb = adj[v]
        width = max(width, len(nb))
        for a in nb:
            adj[a] |= nb
            adj[a].discard(a)
            adj[a].discard(v)
        adj[v] = set()
    return width


def decomposition_from_order(g: Graph, order: list[int]) -> TreeDecomposition:
    """Bag of v = v plus its later neighbours in the filled graph."""
    if g.n == 0:
        return TreeDecomposition([0], [], {0: frozenset()})
    pos = {v: i for i, v in enumerate(order)}
    adj = [set(a) for a in g.adj]
    bags: dict[int, frozenset[int]] = {}
    parent: dict[int, int | None] = {}
    for v in order:
        later = adj[v]
        bags[v] = frozenset(later | {v})
        parent[v] = min(later, key=pos.__getitem__) if later else None
        for a in later:
            adj[a] |= later
            adj[a].discard(a)
            adj[a].discard(v)
        adj[v] = set()
    edges = [(v, p) for v, p in parent.items() if p is not None]
    roots = [v for v in order if parent[v] is None]
    edges += [(roots[i], roots[i + 1]) for i in range(len(roots) - 1)]
    return TreeDecomposition(list(order), edges, bags)


def min_fill_order(g: Graph) -> list[int]:
    """Greedy min-fill elimination, ties to the lowest vertex index."""
    adj = [set(a) for a in g.adj]
    alive = set(range(g.n))
    order = []
    while alive:
        best, best_key = -1, None
        for v in sorted(alive):
            nb = list(adj[v])
            fill = sum(1 for i, a in enumerate(nb) for b in nb[i + 1:] if b not in adj[a])
            key = (fill, v)
            if best_key is None or key < best_key:
                best, best_key = v, key
                if fill == 0:
                    break
        nb = adj[best]
        for a in nb:
            adj[a] |= nb
            adj[a].discard(a)
            adj[a].discard(best)
        adj[best] = set()
        alive.discard(best)
        order.append(best)
    return order


def treewidth_heuristic(g: Graph) -> TreeDecomposition:
    return decomposition_from_order(g, min_fill_order(g))


# --------------------------------------------------------------------------
# exact treewidth
# --------------------------------------------------------------------------


def minor_min_width(g: Graph) -> int:
    """Lower bound: contract a min-degree vertex into its min-degree neighbour, repeatedly."""
    adj = {v: set(a) for v, a in enumerate(g.adj)}
    best = 0
    while len(adj) > 1:
        v = min(adj, key=lambda x: (len(adj[x]), x))
        best = max(best, len(adj[v]))
        if not adj[v]:
            del adj[v]
            continue
        u = min(adj[v], key=lambda x: (len(adj[x]), x))
        for a in adj[v]:
            adj[a].discard(v)
            if a != u:
                adj[a].add(u)
                adj[u].add(a)
        del adj[v]
    return best


def _bitadj(g: Graph) -> list[int]:
    return [sum(1 << w for w in a) for a in g.adj]


def _q_set(adj: list[int], eliminated: int, v: int) -> int:
    """Vertices outside eliminated+v reachable from v through eliminated vertices."""
    seen = 1 << v
    frontier = 1 << v
    out = 0
    while frontier:
        low = frontier & -frontier
        frontier ^= low
        u = low.bit_length() - 1
        nb = adj[u] & ~seen
        seen |= nb
        out |= nb & ~eliminated
        frontier |= nb & eliminated
    return out


def _order_within(g: Graph, k: int) -> list[int] | None:
    """Elimination order of width <= k, found by layered search over eliminated sets."""
    n = g.n
    if n <= k + 1:
        return list(range(n))
    adj = _bitadj(g)
    full = (1 << n) - 1
    back: dict[int, tuple[int, int]] = {0: (-1, -1)}
    layer = [0]
    for _ in range(n - k - 1):
        nxt: list[int] = []
        for s in layer:
            rest = full & ~s
            while rest:
                low = rest & -rest
                rest ^= low
                v = low.bit_length() - 1
                t = s | low
                if t in back:
                    continue
                if bin(_q_set(adj, s, v)).count("1") <= k:
                    back[t] = (s, v)
                    nxt.append(t)
        if not nxt:
            return None
        layer = nxt
    s = layer[0]
    order: list[int] = []
    while s:
        prev, v = back[s]
        order.append(v)
        s = prev
    order.reverse()
    seen = set(order)
    return order + [v for v in range(n) if v not in seen]


def treewidth_exact(g: Graph, cap: int = EXACT_CAP) -> tuple[int, TreeDecomposition]:
    """Exact treewidth with an optimal decomposition.

    Takes the min-fill order when its width meets the minor-min-width
    lower bound; otherwise decides width k for increasing k by the
    eliminated-set dynamic programme.
    """
    if g.n > cap:
        raise SizeLimitExceeded(f"exact treewidth is capped at {cap} vertices, got {g.n}")
    if g.n == 0:
        return -1, decomposition_from_order(g, [])
    upper_order = min_fill_order(g)
    upper = order_width(g, upper_order)
    lower = minor_min_width(g)
    for k in range(lower, upper):
        order = _order_within(g, k)
        if order is not None:
            return k, decomposition_from_order(g, order)
    return upper, decomposition_from_order(g, upper_order)


def treewidth_branch_bound(g: Graph, cap: int = BRANCH_BOUND_CAP) -> int:
    """Independent exact treewidth by depth-first search over elimination orders."""
    if g.n > cap:
        raise SizeLimitExceeded(f"branch and bound is capped at {cap} vertices, got {g.n}")
    if g.n == 0:
        return -1
    best = [g.n - 1]
    memo: dict[frozenset, int] = {}

    def dfs(adj: dict[int, set[int]], width: int) -> None:
        if width >= best[0]:
            return
        if len(adj) <= width + 1:
            best[0] = width
            return
        key = frozenset(adj)
        if memo.get(key, g.n + 1) <= width:
            return
        memo[key] = width
        for v in sorted(adj, key=lambda x: (len(adj[x]), x)):
            nb = adj[v]
            new = {u: set(a) for u, a in adj.items() if u != v}
            for a in nb:
                new[a] |= nb
                new[a].discard(a)
                new[a].discard(v)
            dfs(new, max(width, len(nb)))

    dfs({v: set(a) for v, a in enumerate(g.adj)}, 0)
    return best[0]


def treewidth_permutations(g: Graph) -> int:
    """Oracle: best elimination order over all permutations (n <= 8)."""
    if g.n > 8:
        raise SizeLimitExceeded("permutation oracle is limited to 8 vertices")
    if g.n == 0:
        return -1
    return min(order_width(g, list(p)) for p in permutations(range(g.n)))
