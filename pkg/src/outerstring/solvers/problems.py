"""Problem descriptors, solutions and their verifiers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from ..graphcore import Graph

PROBLEMS = (
    "IndependentSet",
    "VertexCover",
    "DominatingSet",
    "FeedbackVertexSet",
    "qColoring",
    "List3Coloring",
    "InducedMatching",
    "CyclePacking",
)

KINDS = {
    "IndependentSet": "vertex set",
    "VertexCover": "vertex set",
    "DominatingSet": "vertex set",
    "FeedbackVertexSet": "vertex set",
    "qColoring": "coloring",
    "List3Coloring": "coloring",
    "InducedMatching": "edge set",
    "CyclePacking": "cycle set",
}

MAXIMIZE = {"IndependentSet", "InducedMatching", "CyclePacking"}
DECISION = {"qColoring", "List3Coloring"}


@dataclass(frozen=True)
class Problem:
    """A problem name plus its side data (colour count or lists)."""

    name: str
    q: int = 3
    lists: tuple[frozenset[int], ...] | None = None

    def __post_init__(self):
        if self.name not in PROBLEMS:
            raise ValueError(f"unknown problem {self.name!r}; expected one of {', '.join(PROBLEMS)}")
        if self.name == "qColoring" and self.q < 1:
            raise ValueError("q must be at least 1")

    def lists_for(self, g: Graph) -> list[frozenset[int]]:
        if self.name == "List3Coloring":
            if self.lists is None:
                return [frozenset({1, 2, 3})] * g.n
            if len(self.lists) != g.n:
                raise ValueError("one list per vertex is required")
            for f in self.lists:
                if not f <= {1, 2, 3}:
                    raise ValueError("lists must be subsets of {1, 2, 3}")
            return list(self.lists)
        return [frozenset(range(1, self.q + 1))] * g.n


def as_problem(problem: str | Problem, **kw) -> Problem:
    if isinstance(problem, Problem):
        return problem
    lists = kw.get("lists")
    if lists is not None:
        lists = tuple(frozenset(f) for f in lists)
    return Problem(problem, q=kw.get("q") or 3, lists=lists)


@dataclass
class Solution:
    problem: str
    kind: str
    payload: Any = None
    value: int | None = None
    meta: dict = field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return self.kind != "infeasible"

    def to_json(self) -> dict:
        out: dict = {"problem": self.problem, "kind": self.kind, "value": self.value}
        p = self.payload
        if self.kind == "vertex set":
            out["payload"] = sorted(p)
        elif self.kind == "edge set":
            out["payload"] = sorted([min(e), max(e)] for e in p)
        elif self.kind == "cycle set":
            out["payload"] = [list(c) for c in p]
        elif self.kind == "coloring":
            out["payload"] = {str(v): c for v, c in sorted(p.items())}
        else:
            out["payload"] = None
        return out


def infeasible(problem: str) -> Solution:
    return Solution(problem, "infeasible")


def make_solution(problem: str, payload) -> Solution:
    kind = KINDS[problem]
    if kind == "coloring":
        return Solution(problem, kind, dict(payload), 0)
    if kind == "cycle set":
        cycles = [tuple(c) for c in payload]
        return Solution(problem, kind, cycles, len(cycles))
    return Solution(problem, kind, frozenset(payload), len(payload))


# --------------------------------------------------------------------------
# verifiers
# --------------------------------------------------------------------------


def is_forest(g: Graph, removed=frozenset()) -> bool:
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges:
        if u in removed or v in removed:
            continue
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def is_independent(g: Graph, vs) -> bool:
    vs = set(vs)
    return all(not (g.adj[v] & vs) for v in vs)


def is_vertex_cover(g: Graph, vs) -> bool:
    return all(u in vs or v in vs for u, v in g.edges)


def is_dominating(g: Graph, vs) -> bool:
    vs = set(vs)
    return all(v in vs or g.adj[v] & vs for v in range(g.n))


def is_induced_matching(g: Graph, edges) -> bool:
    edges = [tuple(e) for e in edges]
    ends: list[int] = [x for e in edges for x in e]
    if len(ends) != len(set(ends)):
        return False
    if not all(g.has_edge(u, v) for u, v in edges):
        return False
    covered = set(ends)
    # inside the covered set the only edges are the matching edges
    inside = sum(len(g.adj[v] & covered) for v in covered) // 2
    return inside == len(edges)


def is_proper_coloring(g: Graph, colouring: dict, lists) -> bool:
    if set(colouring) != set(range(g.n)):
        return False
    if any(colouring[v] not in lists[v] for v in range(g.n)):
        return False
    return all(colouring[u] != colouring[v] for u, v in g.edges)


def is_cycle_packing(g: Graph, cycles) -> bool:
    used: set[int] = set()
    for c in cycles:
        c = list(c)
        if len(c) < 3 or len(set(c)) != len(c) or used & set(c):
            return False
        used |= set(c)
        if not all(g.has_edge(c[i], c[(i + 1) % len(c)]) for i in range(len(c))):
            return False
    return True


def verify(problem: str | Problem, g: Graph, sol: Solution) -> bool:
    """Check a feasible solution against the problem's definition."""
    prob = as_problem(problem)
    if not sol.feasible:
        return True
    p = sol.payload
    name = prob.name
    if name == "IndependentSet":
        return is_independent(g, p)
    if name == "VertexCover":
        return is_vertex_cover(g, p)
    if name == "DominatingSet":
        return is_dominating(g, p)
    if name == "FeedbackVertexSet":
        return is_forest(g, frozenset(p))
    if name in DECISION:
        return is_proper_coloring(g, p, prob.lists_for(g))
    if name == "InducedMatching":
        return is_induced_matching(g, p)
    return is_cycle_packing(g, p)
