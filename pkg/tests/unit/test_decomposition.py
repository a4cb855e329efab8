"""
Tree Decomposition Unit Tests

Verifies min-fill construction, the minimality merge, validation reports,
width, the BFS-layer path decomposition, and the text record.

No external services required; runs entirely offline.
"""

from __future__ import annotations

import pytest
from hypothesis import given

from tests.helpers import (
    complete_graph,
    connected_graphs,
    cycle_graph,
    graphs_with_orderings,
    path_graph,
    star_graph,
    trees,
)
from treecodec.core.errors import DecompositionError, DisconnectedGraphError, GraphFormatError
from treecodec.models.decomposition import TreeDecomposition
from treecodec.models.graph import Graph, Permutation
from treecodec.models.tree import RootedTree
from treecodec.services.decomposition import (
    bfs_layer_decomposition,
    decomposition_profile,
    is_minimal,
    min_fill_decomposition,
    minimal_decomposition,
    minimize_decomposition,
    validate_decomposition,
    width,
)
from treecodec.services.graphs import bfs_layers

# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _make_td(parents: list[int], bags: list[set[int]]) -> TreeDecomposition:
    return TreeDecomposition(
        tree=RootedTree.from_parents(parents),
        bags=tuple(frozenset(b) for b in bags),
    )


def _bag_set(td: TreeDecomposition) -> set[frozenset[int]]:
    return set(td.bags)


# ---------------------------------------------------------------------------
# Model
# ---------------------------------------------------------------------------


class TestTreeDecompositionModel:
    """TreeDecomposition construction and text record."""

    def test_bag_count_must_match_tree(self):
        with pytest.raises(DecompositionError, match="2 bags for a tree of 1"):
            TreeDecomposition(
                tree=RootedTree.from_parents([-1]),
                bags=(frozenset({0}), frozenset({1})),
            )

    def test_empty_bag_rejected(self):
        with pytest.raises(DecompositionError, match="bag 1 is empty"):
            _make_td([-1, 0], [{0}, set()])

    def test_text_record_layout(self):
        td = _make_td([-1, 0], [{1, 0}, {2, 1}])
        assert td.to_text() == "supernodes 2\nroot 0\nparents -1 0\nbag 0: 0 1\nbag 1: 1 2\n"

    @given(graphs_with_orderings())
    def test_text_record_round_trip(self, case):
        g, perm = case
        td = minimal_decomposition(g, perm)
        assert TreeDecomposition.from_text(td.to_text()) == td

    def test_malformed_record_rejected(self):
        with pytest.raises(DecompositionError, match="malformed"):
            TreeDecomposition.from_text("supernodes x\n")


# ---------------------------------------------------------------------------
# Min-fill
# ---------------------------------------------------------------------------


class TestMinFill:
    """min_fill_decomposition."""

    def test_triangle_is_one_bag(self, triangle):
        td = min_fill_decomposition(triangle, Permutation.identity(3))
        assert td.r == 1
        assert td.bags == (frozenset({0, 1, 2}),)

    def test_four_cycle(self):
        td = min_fill_decomposition(cycle_graph(4), Permutation.identity(4))
        assert _bag_set(td) == {frozenset({0, 1, 3}), frozenset({1, 2, 3})}
        assert width(td) == 3

    def test_single_node(self):
        td = min_fill_decomposition(Graph(n=1), Permutation.identity(1))
        assert td.bags == (frozenset({0}),)

    def test_tree_gives_edge_bags(self):
        td = minimal_decomposition(path_graph(5), Permutation.identity(5))
        assert width(td) == 2
        assert _bag_set(td) == {frozenset({i, i + 1}) for i in range(4)}

    def test_disconnected_rejected(self):
        with pytest.raises(DisconnectedGraphError):
            min_fill_decomposition(Graph(n=2), Permutation.identity(2))

    def test_empty_graph_rejected(self):
        with pytest.raises(GraphFormatError, match="empty graph"):
            min_fill_decomposition(Graph(n=0), Permutation.identity(0))

    def test_tie_order_size_checked(self):
        with pytest.raises(GraphFormatError, match="tie order of size 2"):
            min_fill_decomposition(path_graph(3), Permutation.identity(2))

    @given(graphs_with_orderings(max_n=14))
    def test_output_is_valid(self, case):
        g, perm = case
        assert validate_decomposition(g, min_fill_decomposition(g, perm)).ok

    @given(trees(min_n=2))
    def test_trees_have_width_two(self, g):
        assert width(minimal_decomposition(g, Permutation.identity(g.n))) == 2


# ---------------------------------------------------------------------------
# Minimality merge
# ---------------------------------------------------------------------------


class TestMinimize:
    """minimize_decomposition and is_minimal."""

    def test_subset_pair_merges(self):
        td = minimize_decomposition(_make_td([-1, 0], [{0, 1}, {0, 1, 2}]))
        assert td.bags == (frozenset({0, 1, 2}),)

    def test_minimal_input_unchanged(self):
        td = _make_td([-1, 0], [{0, 1}, {1, 2}])
        assert _bag_set(minimize_decomposition(td)) == _bag_set(td)

    def test_chain_collapses_through_singleton(self):
        td = minimize_decomposition(_make_td([-1, 0, 1], [{0, 1}, {1}, {1, 2}]))
        assert _bag_set(td) == {frozenset({0, 1}), frozenset({1, 2})}
        assert is_minimal(td)

    def test_invalid_input_rejected(self):
        td = _make_td([-1, 0, 1], [{0, 1}, {1, 2}, {0, 2}])
        with pytest.raises(DecompositionError, match="cannot minimize"):
            minimize_decomposition(td)

    @given(graphs_with_orderings(max_n=14))
    def test_output_is_valid_and_minimal(self, case):
        g, perm = case
        td = minimal_decomposition(g, perm)
        assert validate_decomposition(g, td).ok
        assert is_minimal(td)

    @given(graphs_with_orderings(max_n=14))
    def test_width_preserved(self, case):
        g, perm = case
        raw = min_fill_decomposition(g, perm)
        assert width(minimize_decomposition(raw)) == width(raw)

    @given(graphs_with_orderings(max_n=14))
    def test_idempotent(self, case):
        g, perm = case
        once = minimal_decomposition(g, perm)
        assert _bag_set(minimize_decomposition(once)) == _bag_set(once)

    @given(graphs_with_orderings(max_n=14))
    def test_supernode_bound(self, case):
        g, perm = case
        td = minimal_decomposition(g, perm)
        assert td.r <= g.n - width(td) + 1


# ---------------------------------------------------------------------------
# Validation and width
# ---------------------------------------------------------------------------


class TestValidate:
    """validate_decomposition and width."""

    def test_triangle_single_bag_ok(self, triangle):
        report = validate_decomposition(triangle, _make_td([-1], [{0, 1, 2}]))
        assert report.ok
        assert report.summary() == "ok"

    def test_uncovered_edge(self):
        td = _make_td([-1, 0, 1], [{0, 1}, {1, 2}, {2, 3}])
        report = validate_decomposition(cycle_graph(4), td)
        assert not report.ok
        assert [v.condition for v in report.violations] == ["edge coverage"]
        assert "edge (0,3) uncovered" in report.summary()

    def test_running_intersection_violation(self, triangle):
        td = _make_td([-1, 0, 1], [{0, 1}, {1, 2}, {0, 2}])
        report = validate_decomposition(triangle, td)
        assert [v.condition for v in report.violations] == ["running intersection"]
        assert report.violations[0].witness.startswith("node 0")

    def test_missing_node(self):
        report = validate_decomposition(path_graph(3), _make_td([-1], [{0, 1}]))
        assert any(v.witness == "node 2 is in no bag" for v in report.violations)

    def test_unknown_node(self):
        report = validate_decomposition(path_graph(2), _make_td([-1], [{0, 1, 5}]))
        assert any("unknown node 5" in v.witness for v in report.violations)

    def test_width_counts_bag_size(self):
        assert width(_make_td([-1], [{0, 1, 2}])) == 3
        assert width(_make_td([-1, 0], [{0, 1}, {1, 2}])) == 2


# ---------------------------------------------------------------------------
# BFS-layer decomposition
# ---------------------------------------------------------------------------


class TestBfsLayerDecomposition:
    """bfs_layer_decomposition."""

    def test_path_from_end(self):
        td = bfs_layer_decomposition(path_graph(3), 0)
        assert td.bags == (frozenset({0, 1}), frozenset({1, 2}))

    def test_star_from_center(self):
        td = bfs_layer_decomposition(star_graph(4), 0)
        assert td.bags == (frozenset(range(5)),)

    def test_six_cycle(self):
        td = bfs_layer_decomposition(cycle_graph(6), 0)
        assert td.bags == (
            frozenset({0, 1, 5}),
            frozenset({1, 2, 4, 5}),
            frozenset({2, 3, 4}),
        )
        assert width(td) == 4

    def test_single_node(self):
        assert bfs_layer_decomposition(Graph(n=1), 0).bags == (frozenset({0}),)

    def test_disconnected_rejected(self):
        with pytest.raises(DisconnectedGraphError):
            bfs_layer_decomposition(Graph(n=3), 0)

    @given(connected_graphs(max_n=14))
    def test_valid_and_bounded_for_every_root(self, g):
        for root in range(g.n):
            td = bfs_layer_decomposition(g, root)
            assert validate_decomposition(g, td).ok
            widest = max(len(layer) for layer in bfs_layers(g, root, Permutation.identity(g.n)))
            assert width(td) <= 2 * widest


# ---------------------------------------------------------------------------
# Profile
# ---------------------------------------------------------------------------


class TestProfile:
    """decomposition_profile."""

    def test_four_cycle(self):
        profile = decomposition_profile(cycle_graph(4), Permutation.identity(4))
        assert (profile.r, profile.width) == (2, 3)
        assert sorted(profile.bag_sizes) == [3, 3]
        assert sorted(profile.new_nodes) == [1, 3]
        assert profile.slack == 0

    def test_complete_graph(self):
        profile = decomposition_profile(complete_graph(5), Permutation.identity(5))
        assert profile == (5, 1, 5, (5,), (5,))

    @given(graphs_with_orderings(max_n=14))
    def test_new_nodes_partition_graph(self, case):
        g, perm = case
        profile = decomposition_profile(g, perm)
        assert sum(profile.new_nodes) == g.n
        assert profile.slack >= 0
