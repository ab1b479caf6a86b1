from __future__ import annotations

import math
import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from outerstring.errors import SizeLimitExceeded, WidthLimitExceeded
from outerstring.graphcore import Graph, complete_bipartite, complete_graph, cycle_graph, find_biclique, random_graph
from outerstring.solvers import (
    PROBLEMS,
    Problem,
    brute_force,
    cycle_packing_4approx,
    cycles_from_edges,
    fvs_branch,
    greedy_color,
    induced_matching_branch,
    list3_branch,
    shortest_cycle,
    solve_td,
    vc_branch,
    verify,
)
from outerstring.treewidth import treewidth_heuristic

from .test_graphcore import from_nx, graphs, to_nx

PETERSEN = from_nx(nx.petersen_graph())


def td_solve(problem, g, **kw):
    return solve_td(problem, g, treewidth_heuristic(g), **kw)


class TestProblem:
    def test_unknown_name(self):
        with pytest.raises(ValueError):
            Problem("Clique")

    def test_lists_validated(self):
        with pytest.raises(ValueError):
            Problem("List3Coloring", lists=(frozenset({4}),)).lists_for(Graph(1))
        with pytest.raises(ValueError):
            Problem("List3Coloring", lists=(frozenset({1}),)).lists_for(Graph(2))

    def test_solution_json(self):
        sol = td_solve("InducedMatching", cycle_graph(6))
        obj = sol.to_json()
        assert obj["kind"] == "edge set" and obj["value"] == 2
        assert all(a < b for a, b in obj["payload"])


class TestKnownValues:
    @pytest.mark.parametrize("name, want", [
        ("IndependentSet", 4), ("VertexCover", 6), ("DominatingSet", 3), ("FeedbackVertexSet", 3),
        ("InducedMatching", 3), ("CyclePacking", 2),
    ])
    def test_petersen(self, name, want):
        sol = td_solve(name, PETERSEN)
        assert sol.value == want and verify(name, PETERSEN, sol)

    def test_petersen_colouring(self):
        assert not td_solve("qColoring", PETERSEN, q=2).feasible
        sol = td_solve("qColoring", PETERSEN, q=3)
        assert sol.feasible and verify(Problem("qColoring", q=3), PETERSEN, sol)

    def test_list_colouring_respects_lists(self):
        g = cycle_graph(4)
        lists = (frozenset({1}), frozenset({2}), frozenset({1}), frozenset({2, 3}))
        sol = td_solve(Problem("List3Coloring", lists=lists), g)
        assert sol.payload == {0: 1, 1: 2, 2: 1, 3: 2}
        tight = (frozenset({1}), frozenset({1, 2}), frozenset({2}), frozenset({2}))
        assert not td_solve(Problem("List3Coloring", lists=tight), g).feasible

    def test_empty_graph(self):
        for name in PROBLEMS:
            sol = td_solve(name, Graph(0))
            assert sol.feasible and sol.value == 0

    def test_width_cap(self):
        with pytest.raises(WidthLimitExceeded):
            td_solve("IndependentSet", complete_graph(6), cap=4)

    def test_brute_force_cap(self):
        with pytest.raises(SizeLimitExceeded):
            brute_force("CyclePacking", cycle_graph(13))


class TestAgainstOracles:
    @settings(max_examples=40, deadline=None)
    @given(graphs(10))
    def test_independent_set_against_networkx(self, g):
        comp = nx.complement(to_nx(g))
        want = len(nx.max_weight_clique(comp, weight=None)[0]) if g.n else 0
        assert td_solve("IndependentSet", g).value == want
        assert td_solve("VertexCover", g).value == g.n - want

    @settings(max_examples=40, deadline=None)
    @given(graphs(9))
    def test_induced_matching_against_networkx(self, g):
        line = nx.line_graph(to_nx(g))
        want = len(nx.max_weight_clique(nx.complement(nx.power(line, 2)), weight=None)[0]) if g.m else 0
        assert td_solve("InducedMatching", g).value == want

    @settings(max_examples=30, deadline=None)
    @given(graphs(9), st.sampled_from(PROBLEMS), st.integers(1, 3))
    def test_dp_matches_brute_force(self, g, name, q):
        rng = random.Random(g.m * 31 + g.n)
        lists = tuple(frozenset(rng.sample([1, 2, 3], rng.randint(1, 3))) for _ in range(g.n))
        prob = Problem(name, q=q, lists=lists if name == "List3Coloring" else None)
        got, want = td_solve(prob, g), brute_force(prob, g)
        assert got.feasible == want.feasible and got.value == want.value
        assert verify(prob, g, got)


class TestBranching:
    def test_vc_thresholds(self):
        g = complete_bipartite(3, 3)
        assert vc_branch(g, 3).value == 3
        assert not vc_branch(g, 2).feasible
        with pytest.raises(ValueError):
            vc_branch(g, -1)

    def test_fvs_on_clique(self):
        g = complete_graph(5)
        assert not fvs_branch(g, 2).feasible
        sol = fvs_branch(g, 3)
        assert sol.value == 3 and verify("FeedbackVertexSet", g, sol)

    @settings(max_examples=25, deadline=None)
    @given(graphs(11))
    def test_branching_matches_brute_force(self, g):
        vc = brute_force("VertexCover", g).value
        fvs = brute_force("FeedbackVertexSet", g).value
        for k in (vc - 1, vc, vc + 1):
            if k >= 0:
                assert vc_branch(g, k).feasible == (k >= vc)
        for k in (fvs - 1, fvs):
            if k >= 0:
                assert fvs_branch(g, k).feasible == (k >= fvs)

    def test_dense_graphs_branch(self):
        for seed in range(6):
            g = random_graph(11, 0.7, random.Random(seed))
            im = induced_matching_branch(g)
            assert im.value == brute_force("InducedMatching", g).value and verify("InducedMatching", g, im)
            assert im.meta["nodes"] >= 1
            lists = [frozenset({1, 2, 3})] * g.n
            col = list3_branch(g, lists)
            assert col.feasible == brute_force(Problem("List3Coloring", lists=tuple(lists)), g).feasible

    def test_list3_monochrome_side(self):
        g = complete_bipartite(3, 3)
        sol = list3_branch(g)
        assert sol.feasible and verify("List3Coloring", g, sol)
        lists = [frozenset({1})] * 3 + [frozenset({1, 2})] * 3
        sol = list3_branch(g, lists)
        assert sol.payload == {0: 1, 1: 1, 2: 1, 3: 2, 4: 2, 5: 2}


class TestCyclePacking:
    def test_shortest_cycle(self):
        cyc = shortest_cycle(cycle_graph(5), range(5))
        assert sorted(cyc) == [0, 1, 2, 3, 4]
        assert all(abs(a - b) in (1, 4) for a, b in zip(cyc, cyc[1:] + cyc[:1]))
        assert len(shortest_cycle(PETERSEN, range(10))) == 5
        assert shortest_cycle(Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)]), range(4)) is None

    def test_cycles_from_edges(self):
        assert cycles_from_edges([(2, 0), (0, 1), (1, 2), (5, 4), (3, 4), (3, 5)]) == [(0, 1, 2), (3, 4, 5)]

    def test_two_triangles(self):
        g = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
        sol = cycle_packing_4approx(g)
        assert sol.value == 2 and sol.meta["stripped"] == 2

    @settings(max_examples=30, deadline=None)
    @given(graphs(10))
    def test_quarter_of_optimum(self, g):
        sol = cycle_packing_4approx(g)
        opt = brute_force("CyclePacking", g).value
        assert verify("CyclePacking", g, sol)
        assert math.ceil(opt / 4) <= sol.value <= opt
        rest, _ = g.induced(sol.meta["remainder"])
        assert find_biclique(rest, 2) is None


class TestGreedyColour:
    @settings(max_examples=40, deadline=None)
    @given(graphs(12))
    def test_proper_within_degeneracy(self, g):
        from outerstring.graphcore import degeneracy

        col = greedy_color(g)
        assert all(col[u] != col[v] for u, v in g.edges)
        assert max(col.values(), default=0) <= degeneracy(g)[0] + 1
