"""
Graph Codec Unit Tests

Verifies encode/decode round trips, the decision-sequence text and byte
forms, replay errors, decision accounting and the baseline adjacency
sequences used for hypothesis-space counts.

No external services required; runs entirely offline.
"""

from __future__ import annotations

import itertools
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given

from tests.helpers import (
    complete_graph,
    cycle_graph,
    graphs_with_orderings,
    path_graph,
    star_graph,
)
from treecodec.core.errors import DisconnectedGraphError, SequenceFormatError
from treecodec.models.graph import Graph, Permutation
from treecodec.models.sequence import AddStep, DecisionSequence, SupernodeDecisions
from treecodec.services.codec import (
    Ordering,
    SequenceMethod,
    adjacency_sequence,
    decision_counts,
    decode_graph,
    encode_graph,
    unique_sequence_count,
)
from treecodec.services.decomposition import is_minimal, minimal_decomposition, validate_decomposition, width
from treecodec.services.graphs import graph_isomorphic
from treecodec.services.process import replay_sequence

# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _p3_sequence() -> DecisionSequence:
    return encode_graph(path_graph(3), Permutation.identity(3))


def _with_child(ds: DecisionSequence, child: SupernodeDecisions) -> DecisionSequence:
    return replace(ds, supernodes=(ds.supernodes[0], child))


# ---------------------------------------------------------------------------
# Encoding
# ---------------------------------------------------------------------------


class TestEncode:
    """encode_graph on hand-traced graphs."""

    def test_triangle(self, triangle):
        ds = encode_graph(triangle, Permutation.identity(3))
        assert ds.tree_plr == (0,)
        assert ds.supernodes == (
            SupernodeDecisions((), (AddStep(1), AddStep(1, (1,)), AddStep(1, (1, 1)), AddStep(0))),
        )

    def test_single_edge(self):
        ds = encode_graph(path_graph(2), Permutation.identity(2))
        assert ds.tree_plr == (0,)
        assert ds.supernodes[0].add_steps == (AddStep(1), AddStep(1, (1,)), AddStep(0))

    def test_three_path(self):
        ds = _p3_sequence()
        assert ds.tree_plr == (1, 0)
        root, child = ds.supernodes
        assert root.add_steps == (AddStep(1), AddStep(1, (1,)), AddStep(0))
        assert sum(child.sharing_bits) == 1
        assert child.add_steps == (AddStep(1, (1,)), AddStep(0))

    def test_single_node(self):
        ds = encode_graph(Graph(n=1), Permutation.identity(1))
        assert ds.tree_plr == (0,)
        assert ds.supernodes == (SupernodeDecisions((), (AddStep(1), AddStep(0))),)

    def test_disconnected_rejected(self):
        with pytest.raises(DisconnectedGraphError):
            encode_graph(Graph(n=2), Permutation.identity(2))

    def test_every_node_introduced_once(self):
        ds = encode_graph(cycle_graph(7), Permutation.identity(7))
        assert ds.node_count == 7


# ---------------------------------------------------------------------------
# Decoding
# ---------------------------------------------------------------------------


class TestDecode:
    """decode_graph and replay_sequence."""

    def test_triangle_round_trip(self, triangle):
        assert decode_graph(encode_graph(triangle, Permutation.identity(3))) == triangle

    def test_four_cycle_all_orderings(self):
        c4 = cycle_graph(4)
        for order in itertools.permutations(range(4)):
            decoded = decode_graph(encode_graph(c4, Permutation.of(order)))
            assert graph_isomorphic(decoded, c4)

    @given(graphs_with_orderings(max_n=14))
    def test_round_trip_is_isomorphic(self, case):
        g, perm = case
        assert graph_isomorphic(decode_graph(encode_graph(g, perm)), g)

    @given(graphs_with_orderings(max_n=14))
    def test_replayed_decomposition_is_valid_and_minimal(self, case):
        g, perm = case
        result = replay_sequence(encode_graph(g, perm))
        assert validate_decomposition(result.graph, result.decomposition).ok
        assert is_minimal(result.decomposition)
        assert result.graph.n == g.n

    def test_empty_sharing_rejected(self):
        ds = _p3_sequence()
        child = SupernodeDecisions((0, 0), ds.supernodes[1].add_steps)
        with pytest.raises(SequenceFormatError, match="empty sharing set"):
            decode_graph(_with_child(ds, child))

    def test_full_sharing_rejected(self):
        ds = _p3_sequence()
        child = SupernodeDecisions((1, 1), ds.supernodes[1].add_steps)
        with pytest.raises(SequenceFormatError, match="whole parent bag"):
            decode_graph(_with_child(ds, child))

    def test_sharing_length_checked(self):
        ds = _p3_sequence()
        child = SupernodeDecisions((1,), ds.supernodes[1].add_steps)
        with pytest.raises(SequenceFormatError, match="1 sharing bits for a parent bag of 2"):
            decode_graph(_with_child(ds, child))

    def test_edge_bit_length_checked(self):
        ds = _p3_sequence()
        child = SupernodeDecisions(ds.supernodes[1].sharing_bits, (AddStep(1, (1, 1)), AddStep(0)))
        with pytest.raises(SequenceFormatError, match="2 edge bits for 1 bag members"):
            decode_graph(_with_child(ds, child))

    def test_zero_node_bag_rejected(self):
        ds = _p3_sequence()
        child = SupernodeDecisions(ds.supernodes[1].sharing_bits, (AddStep(0),))
        with pytest.raises(SequenceFormatError, match="zero-node bag"):
            decode_graph(_with_child(ds, child))

    def test_missing_stop_rejected(self):
        ds = _p3_sequence()
        child = SupernodeDecisions(ds.supernodes[1].sharing_bits, (AddStep(1, (1,)),))
        with pytest.raises(SequenceFormatError, match="without a stop"):
            decode_graph(_with_child(ds, child))

    def test_trailing_supernode_rejected(self):
        ds = _p3_sequence()
        extra = replace(ds, supernodes=(*ds.supernodes, ds.supernodes[1]))
        with pytest.raises(SequenceFormatError, match="beyond those the process consumed"):
            decode_graph(extra)

    def test_truncated_plr_rejected(self):
        ds = replace(_p3_sequence(), tree_plr=(1,))
        with pytest.raises(SequenceFormatError, match="PLR ends"):
            decode_graph(ds)


# ---------------------------------------------------------------------------
# Serialized forms
# ---------------------------------------------------------------------------


class TestSequenceForms:
    """DecisionSequence text and byte forms."""

    def test_text_form(self):
        assert _p3_sequence().to_text() == (
            "plr 1,0\nnode 0 share - add 1: 1:1 0\nnode 1 share 01 add 1:1 0\n"
        )

    @given(graphs_with_orderings(max_n=12))
    def test_text_form_round_trip(self, case):
        g, perm = case
        ds = encode_graph(g, perm)
        assert DecisionSequence.from_text(ds.to_text()) == ds

    def test_text_must_start_with_plr(self):
        with pytest.raises(SequenceFormatError, match="'plr' line"):
            DecisionSequence.from_text("node 0 share - add 0\n")

    def test_bad_add_token(self):
        with pytest.raises(SequenceFormatError, match="malformed add token"):
            DecisionSequence.from_text("plr 0\nnode 0 share - add 2\n")

    def test_bad_bits(self):
        with pytest.raises(SequenceFormatError, match="not a bit string"):
            DecisionSequence.from_text("plr 0\nnode 0 share - add 1: 1:2 0\n")

    def test_byte_form_distinguishes_section_boundaries(self):
        a = DecisionSequence((0,), (SupernodeDecisions((), (AddStep(1), AddStep(1, (1,)), AddStep(0))),))
        b = DecisionSequence((0,), (SupernodeDecisions((), (AddStep(1, (1,)), AddStep(1), AddStep(0))),))
        assert a.to_bytes() != b.to_bytes()


# ---------------------------------------------------------------------------
# Decision accounting
# ---------------------------------------------------------------------------


class TestDecisionCounts:
    """decision_counts."""

    def test_triangle(self, triangle):
        counts = decision_counts(encode_graph(triangle, Permutation.identity(3)), k=3)
        assert counts.edge_steps == 3
        assert counts.edge_steps <= 3 * (3 - 1)
        assert counts.add_steps == 3
        assert counts.within_bounds()

    def test_three_path(self):
        counts = decision_counts(_p3_sequence(), k=2)
        assert counts.sharing_steps == 2
        assert counts.tree_steps == 2
        assert counts.within_bounds()

    def test_single_node(self):
        counts = decision_counts(encode_graph(Graph(n=1), Permutation.identity(1)), k=1)
        assert (counts.tree_steps, counts.sharing_steps, counts.edge_steps) == (1, 0, 0)
        # only the stop of the single bag is charged
        assert counts.add_steps == 1

    @given(graphs_with_orderings(max_n=14))
    def test_within_worst_case_bounds(self, case):
        g, perm = case
        k = width(minimal_decomposition(g, perm))
        ds = encode_graph(g, perm)
        counts = decision_counts(ds, k)
        assert counts.within_bounds()
        assert ds.r <= g.n - k + 1


# ---------------------------------------------------------------------------
# Baselines and hypothesis-space counts
# ---------------------------------------------------------------------------


class TestAdjacencySequence:
    """adjacency_sequence."""

    def test_triangle(self, triangle):
        for ordering in Ordering:
            assert adjacency_sequence(triangle, Permutation.of([2, 0, 1]), ordering) == [1, 1, 1]

    def test_path_from_end(self):
        assert adjacency_sequence(path_graph(3), Permutation.identity(3), Ordering.BFS) == [1, 0, 1]

    def test_path_from_middle(self):
        assert adjacency_sequence(path_graph(3), Permutation.of([1, 0, 2]), Ordering.BFS) == [1, 1, 0]

    def test_dfs_differs_from_bfs(self):
        # 0-1, 1-2, 0-3: DFS order 0,1,2,3 and BFS order 0,1,3,2
        g = Graph.from_edges(4, [(0, 1), (1, 2), (0, 3)])
        perm = Permutation.identity(4)
        assert adjacency_sequence(g, perm, Ordering.DFS) == [1, 0, 1, 1, 0, 0]
        assert adjacency_sequence(g, perm, Ordering.BFS) == [1, 1, 0, 0, 1, 0]

    def test_disconnected_rejected(self):
        with pytest.raises(DisconnectedGraphError):
            adjacency_sequence(Graph(n=2), Permutation.identity(2), Ordering.BFS)


class TestUniqueSequenceCount:
    """unique_sequence_count."""

    @pytest.mark.parametrize("method", list(SequenceMethod))
    def test_single_node(self, method):
        assert unique_sequence_count(Graph(n=1), 20, method, np.random.default_rng(0)) == 1

    def test_triangle_bfs(self, triangle):
        assert unique_sequence_count(triangle, 200, SequenceMethod.BFS, np.random.default_rng(1)) == 1

    def test_star_td_not_larger_than_bfs(self):
        star = star_graph(4)
        td = unique_sequence_count(star, 300, SequenceMethod.TD, np.random.default_rng(2))
        bfs = unique_sequence_count(star, 300, SequenceMethod.BFS, np.random.default_rng(2))
        assert td <= bfs

    def test_complete_graph_td_is_single(self):
        k5 = complete_graph(5)
        assert unique_sequence_count(k5, 50, SequenceMethod.TD, np.random.default_rng(3)) == 1

    def test_seeded(self):
        c6 = cycle_graph(6)
        a = unique_sequence_count(c6, 40, SequenceMethod.DFS, np.random.default_rng(4))
        b = unique_sequence_count(c6, 40, SequenceMethod.DFS, np.random.default_rng(4))
        assert a == b

    def test_zero_permutations_rejected(self, triangle):
        with pytest.raises(ValueError, match="n_perms"):
            unique_sequence_count(triangle, 0, SequenceMethod.TD, np.random.default_rng(0))
