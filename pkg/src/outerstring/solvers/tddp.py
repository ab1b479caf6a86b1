"""Dynamic programming over tree decompositions.

The decomposition is walked bottom-up as an implicit nice decomposition:
at every tree node the children's tables are brought to the node's bag by
forgetting and introducing single vertices, joined pairwise, and then the
node's own edges are introduced. Each graph edge is owned by the topmost
tree node whose bag holds both ends, so it is introduced exactly once and
before either end is forgotten. Gains are collected on forget and on edge
introduction, never on vertex introduction, which keeps joins additive.
"""

from __future__ import annotations

from ..errors import WidthLimitExceeded
from ..graphcore import Graph
from ..treewidth import TreeDecomposition
from .problems import DECISION, MAXIMIZE, Problem, Solution, as_problem, infeasible, make_solution

WIDTH_CAP = 12

State = dict


# --------------------------------------------------------------------------
# per-problem handlers
# --------------------------------------------------------------------------


class _Handler:
    def intro(self, st: State, v: int):
        raise NotImplementedError

    def edge(self, st: State, u: int, v: int):
        return [(st, 0, ())]

    def forget(self, st: State, v: int):
        raise NotImplementedError

    def join_key(self, st: State):
        return tuple(sorted(st.items()))

    def join(self, a: State, b: State):
        return a, 0


class _Subset(_Handler):
    """Labels 0/1; ``bad_edge`` rejects an edge given both labels; gain on forgetting 1."""

    def __init__(self, bad_edge):
        self.bad_edge = bad_edge

    def intro(self, st, v):
        return [({**st, v: 0}, 0, ()), ({**st, v: 1}, 0, ())]

    def edge(self, st, u, v):
        return [] if self.bad_edge(st[u], st[v]) else [(st, 0, ())]

    def forget(self, st, v):
        lab = st[v]
        rest = {k: x for k, x in st.items() if k != v}
        return [(rest, lab, (v,) if lab else ())]


IN, DOM, UND = 2, 1, 0


class _Dominating(_Handler):
    def intro(self, st, v):
        return [({**st, v: IN}, 0, ()), ({**st, v: UND}, 0, ())]

    def edge(self, st, u, v):
        st = dict(st)
        if st[u] == IN and st[v] == UND:
            st[v] = DOM
        elif st[v] == IN and st[u] == UND:
            st[u] = DOM
        return [(st, 0, ())]

    def forget(self, st, v):
        lab = st[v]
        if lab == UND:
            return []
        rest = {k: x for k, x in st.items() if k != v}
        return [(rest, 1 if lab == IN else 0, (v,) if lab == IN else ())]

    def join_key(self, st):
        return tuple(sorted((k, x == IN) for k, x in st.items()))

    def join(self, a, b):
        return {k: IN if x == IN else max(x, b[k]) for k, x in a.items()}, 0


def _canon_blocks(st: State) -> State:
    """Relabel block ids by first appearance in vertex order; -1 marks deletion."""
    names: dict[int, int] = {}
    out = {}
    for k in sorted(st):
        x = st[k]
        if x < 0:
            out[k] = x
        else:
            out[k] = names.setdefault(x, len(names))
    return out


class _FeedbackVertexSet(_Handler):
    """Kept bag vertices carry a block id of the forest built so far; -1 means deleted."""

    def intro(self, st, v):
        fresh = max([x for x in st.values()], default=-1) + 1
        return [({**st, v: -1}, 0, ()), (_canon_blocks({**st, v: fresh}), 0, ())]

    def edge(self, st, u, v):
        a, b = st[u], st[v]
        if a < 0 or b < 0:
            return [(st, 0, ())]
        if a == b:
            return []
        merged = {k: (a if x == b else x) for k, x in st.items()}
        return [(_canon_blocks(merged), 0, ())]

    def forget(self, st, v):
        lab = st[v]
        rest = _canon_blocks({k: x for k, x in st.items() if k != v})
        return [(rest, 1 if lab < 0 else 0, (v,) if lab < 0 else ())]

    def join_key(self, st):
        return tuple(sorted((k, x < 0) for k, x in st.items()))

    def join(self, a, b):
        parent = {k: k for k in a if a[k] >= 0}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for side in (a, b):
            first: dict[int, int] = {}
            for k in sorted(side):
                blk = side[k]
                if blk < 0:
                    continue
                if blk in first:
                    r1, r2 = find(first[blk]), find(k)
                    if r1 == r2:
                        return None
                    parent[r1] = r2
                else:
                    first[blk] = k
        return _canon_blocks({k: (find(k) if a[k] >= 0 else -1) for k in a}), 0


class _Coloring(_Handler):
    def __init__(self, lists):
        self.lists = lists

    def intro(self, st, v):
        return [({**st, v: c}, 0, ()) for c in sorted(self.lists[v])]

    def edge(self, st, u, v):
        return [] if st[u] == st[v] else [(st, 0, ())]

    def forget(self, st, v):
        rest = {k: x for k, x in st.items() if k != v}
        return [(rest, 0, ((v, st[v]),))]


OUT, OPEN, MATCHED = 0, 1, 2


class _InducedMatching(_Handler):
    """0 = outside the matched set, 1 = matched set but partner unseen, 2 = partner seen."""

    def intro(self, st, v):
        return [({**st, v: OUT}, 0, ()), ({**st, v: OPEN}, 0, ())]

    def edge(self, st, u, v):
        a, b = st[u], st[v]
        if a == OUT or b == OUT:
            return [(st, 0, ())]
        if a == OPEN and b == OPEN:
            return [({**st, u: MATCHED, v: MATCHED}, 1, ((min(u, v), max(u, v)),))]
        return []

    def forget(self, st, v):
        if st[v] == OPEN:
            return []
        return [({k: x for k, x in st.items() if k != v}, 0, ())]

    def join_key(self, st):
        return tuple(sorted((k, x != OUT) for k, x in st.items()))

    def join(self, a, b):
        out = {}
        for k, x in a.items():
            y = b[k]
            if x == MATCHED and y == MATCHED:
                return None
            out[k] = max(x, y)
        return out, 0


class _CyclePacking(_Handler):
    """Each bag vertex holds (degree, partner); partner pairs the two ends of a partial path."""

    def intro(self, st, v):
        return [({**st, v: (0, -1)}, 0, ())]

    def edge(self, st, u, v):
        out = [(st, 0, ())]
        (du, pu), (dv, pv) = st[u], st[v]
        if du == 2 or dv == 2:
            return out
        e = ((min(u, v), max(u, v)),)
        if du == 1 and dv == 1 and pu == v:
            out.append(({**st, u: (2, -1), v: (2, -1)}, 1, e))
            return out
        new = dict(st)
        end_u = pu if du == 1 else u
        end_v = pv if dv == 1 else v
        new[u] = (du + 1, -1)
        new[v] = (dv + 1, -1)
        # the two outer ends of the merged path now point at each other
        new[end_u] = (new[end_u][0], end_v)
        new[end_v] = (new[end_v][0], end_u)
        out.append((new, 0, e))
        return out

    def forget(self, st, v):
        if st[v][0] == 1:
            return []
        return [({k: x for k, x in st.items() if k != v}, 0, ())]

    def join_key(self, st):
        return None

    def join(self, a, b):
        out: dict = {}
        links: dict[int, list[int]] = {}
        for k in a:
            (da, pa), (db, pb) = a[k], b[k]
            if da + db > 2:
                return None
            out[k] = da + db
            links[k] = [p for d, p in ((da, pa), (db, pb)) if d == 1]
        closed = 0
        res: dict = {}
        seen: set[int] = set()
        for k in sorted(a):
            if k in seen or len(links[k]) != 1:
                continue
            # walk from one path end to the other
            prev, cur = k, links[k][0]
            seen.add(k)
            while len(links[cur]) == 2:
                seen.add(cur)
                nxt = links[cur][0] if links[cur][0] != prev else links[cur][1]
                prev, cur = cur, nxt
            seen.add(cur)
            res[k] = (1, cur)
            res[cur] = (1, k)
        for k in sorted(a):
            if len(links[k]) == 2 and k not in seen:
                # every remaining linked vertex lies on a closed cycle of virtual edges
                closed += 1
                prev, cur = None, k
                while cur not in seen:
                    seen.add(cur)
                    nxt = links[cur][0] if links[cur][0] != prev else links[cur][1]
                    prev, cur = cur, nxt
        for k in a:
            if k not in res:
                res[k] = (out[k], -1)
        return res, closed


def _handler(prob: Problem, g: Graph) -> _Handler:
    name = prob.name
    if name == "IndependentSet":
        return _Subset(lambda x, y: x == 1 and y == 1)
    if name == "VertexCover":
        return _Subset(lambda x, y: x == 0 and y == 0)
    if name == "DominatingSet":
        return _Dominating()
    if name == "FeedbackVertexSet":
        return _FeedbackVertexSet()
    if name in DECISION:
        return _Coloring(prob.lists_for(g))
    if name == "InducedMatching":
        return _InducedMatching()
    return _CyclePacking()


# --------------------------------------------------------------------------
# the table machinery
# --------------------------------------------------------------------------


def _freeze(st: State):
    return tuple(sorted(st.items()))


class _Tables:
    def __init__(self, maximize: bool):
        self.maximize = maximize

    def better(self, a: int, b: int) -> bool:
        return a > b if self.maximize else a < b

    def put(self, table: dict, st: State, value: int, wit) -> None:
        key = _freeze(st)
        old = table.get(key)
        if old is None or self.better(value, old[0]):
            table[key] = (value, wit)


def _flatten(wit) -> list:
    items: list = []
    stack = [wit]
    while stack:
        w = stack.pop()
        if w is None:
            continue
        own, left, right = w
        items.extend(own)
        stack.append(left)
        stack.append(right)
    return items


def _rooted(td: TreeDecomposition):
    nb = td.neighbours()
    root = td.nodes[0]
    parent = {root: None}
    order = [root]
    for a in order:
        for b in nb[a]:
            if b not in parent:
                parent[b] = a
                order.append(b)
    children = {a: [b for b in nb[a] if parent[b] == a] for a in td.nodes}
    return root, parent, order, children


def solve_td(problem: str | Problem, g: Graph, td: TreeDecomposition, cap: int = WIDTH_CAP, **kw) -> Solution:
    """Optimal solution by dynamic programming over ``td`` (assumed valid for ``g``)."""
    prob = as_problem(problem, **kw)
    if td.width > cap:
        raise WidthLimitExceeded(f"decomposition width {td.width} exceeds the cap {cap}")
    h = _handler(prob, g)
    tab = _Tables(prob.name in MAXIMIZE)
    root, parent, order, children = _rooted(td)

    # owner of an edge: its topmost node, i.e. the first in BFS order holding both ends
    owned: dict[int, list[tuple[int, int]]] = {a: [] for a in td.nodes}
    depth_first = {a: i for i, a in enumerate(order)}
    holders: dict[int, list[int]] = {v: [] for v in range(g.n)}
    for a in td.nodes:
        for v in td.bags[a]:
            holders[v].append(a)
    for u, v in g.edges:
        common = set(holders[u]) & set(holders[v])
        owned[min(common, key=depth_first.__getitem__)].append((u, v))

    def step(table: dict, moves) -> dict:
        out: dict = {}
        for key, (val, wit) in table.items():
            st = dict(key)
            for new, gain, items in moves(st):
                tab.put(out, new, val + gain, (items, wit, None) if items else wit)
        return out

    def lift(table: dict, have: frozenset, want: frozenset) -> dict:
        for v in sorted(have - want):
            table = step(table, lambda st, v=v: h.forget(st, v))
        for v in sorted(want - have):
            table = step(table, lambda st, v=v: h.intro(st, v))
        return table

    def join(t1: dict, t2: dict) -> dict:
        buckets: dict = {}
        for key, entry in t2.items():
            buckets.setdefault(h.join_key(dict(key)), []).append((dict(key), entry))
        out: dict = {}
        for key, (v1, w1) in t1.items():
            s1 = dict(key)
            for s2, (v2, w2) in buckets.get(h.join_key(s1), ()):
                res = h.join(s1, s2)
                if res is None:
                    continue
                st, gain = res
                tab.put(out, st, v1 + v2 + gain, ((), w1, w2))
        return out

    tables: dict[int, dict] = {}
    for a in reversed(order):
        bag = td.bags[a]
        table = None
        for c in children[a]:
            lifted = lift(tables.pop(c), td.bags[c], bag)
            table = lifted if table is None else join(table, lifted)
        if table is None:
            table = lift({(): (0, None)}, frozenset(), bag)
        for u, v in owned[a]:
            table = step(table, lambda st, u=u, v=v: h.edge(st, u, v))
        tables[a] = table
    final = lift(tables[root], td.bags[root], frozenset())
    if () not in final:
        return infeasible(prob.name)
    value, wit = final[()]
    items = _flatten(wit)
    if prob.name in DECISION:
        return make_solution(prob.name, dict(items))
    if prob.name == "CyclePacking":
        return make_solution(prob.name, cycles_from_edges(items))
    return make_solution(prob.name, items)


def cycles_from_edges(edges) -> list[tuple[int, ...]]:
    """Split a 2-regular edge set into cycles, each starting at its smallest vertex."""
    adj: dict[int, list[int]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    seen: set[int] = set()
    cycles = []
    for s in sorted(adj):
        if s in seen:
            continue
        cyc = [s]
        seen.add(s)
        prev, cur = s, min(adj[s])
        while cur != s:
            cyc.append(cur)
            seen.add(cur)
            a, b = adj[cur]
            prev, cur = cur, (b if a == prev else a)
        cycles.append(tuple(cyc))
    return cycles
