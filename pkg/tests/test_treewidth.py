from __future__ import annotations

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from outerstring.construct import lowerbound_instance
from outerstring.errors import ParseError, SizeLimitExceeded
from outerstring.graphcore import Graph, complete_bipartite, complete_graph, cycle_graph, grid_graph, intersection_graph, path_graph
from outerstring.treewidth import (
    TreeDecomposition,
    decomposition_from_order,
    min_fill_order,
    minor_min_width,
    order_width,
    treewidth_branch_bound,
    treewidth_exact,
    treewidth_heuristic,
    treewidth_permutations,
    validate_decomposition,
)

from .test_graphcore import from_nx, graphs


class TestValidation:
    def test_valid_path_decomposition(self):
        g = path_graph(3)
        td = TreeDecomposition([0, 1], [(0, 1)], {0: frozenset({0, 1}), 1: frozenset({1, 2})})
        res = validate_decomposition(g, td)
        assert res and res.width == 1

    def test_each_axiom_reported(self):
        g = cycle_graph(4)
        td = TreeDecomposition([0, 1, 2], [(0, 1), (1, 2)],
                               {0: frozenset({0, 1}), 1: frozenset({1, 2}), 2: frozenset({0, 3})})
        res = validate_decomposition(g, td)
        assert not res
        text = " ".join(res.violations)
        assert "edge (2, 3) is in no bag" in text
        assert "vertex 0 are not connected" in text

    def test_tree_shape_checked(self):
        g = Graph(2)
        td = TreeDecomposition([0, 1], [], {0: frozenset({0}), 1: frozenset({1})})
        assert "tree has the wrong number of edges" in validate_decomposition(g, td).violations

    def test_json(self):
        td = treewidth_heuristic(cycle_graph(5))
        assert TreeDecomposition.from_json(td.to_json()) == td
        with pytest.raises(ParseError):
            TreeDecomposition.from_json({"nodes": [0]})


class TestWidths:
    @pytest.mark.parametrize("g, tw", [
        (Graph(0), -1), (Graph(3), 0), (path_graph(6), 1), (cycle_graph(6), 2), (complete_graph(4), 3),
        (complete_bipartite(3, 3), 3), (grid_graph(3, 3), 3), (grid_graph(4, 5), 4),
        (from_nx(nx.petersen_graph()), 4),
    ])
    def test_known_values(self, g, tw):
        width, td = treewidth_exact(g)
        assert width == tw
        if g.n:
            assert validate_decomposition(g, td) and td.width == tw

    @settings(max_examples=60, deadline=None)
    @given(graphs(8))
    def test_three_exact_methods_agree(self, g):
        want = treewidth_permutations(g)
        assert treewidth_exact(g)[0] == want
        assert treewidth_branch_bound(g) == want
        assert minor_min_width(g) <= max(want, 0)

    @settings(max_examples=60, deadline=None)
    @given(graphs(12))
    def test_heuristic_is_valid_upper_bound(self, g):
        td = treewidth_heuristic(g)
        assert validate_decomposition(g, td)
        assert td.width >= treewidth_exact(g)[0]
        nx_width, _ = nx.algorithms.approximation.treewidth_min_fill_in(to_graph(g))
        assert treewidth_exact(g)[0] <= nx_width

    def test_order_width_matches_decomposition(self):
        g = grid_graph(3, 4)
        order = min_fill_order(g)
        td = decomposition_from_order(g, order)
        assert td.width == order_width(g, order) and validate_decomposition(g, td)

    def test_folk_treewidth(self):
        for m, tw in ((2, 2), (3, 3)):
            assert treewidth_exact(intersection_graph(lowerbound_instance(m)))[0] == tw

    def test_caps(self):
        with pytest.raises(SizeLimitExceeded):
            treewidth_exact(complete_graph(6), cap=5)
        with pytest.raises(SizeLimitExceeded):
            treewidth_permutations(complete_graph(9))


def to_graph(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h
