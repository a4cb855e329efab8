"""
Decision Model Unit Tests

Verifies smoothed probabilities over admissible outcomes, forced-decision
handling, training determinism, tree-only training and model persistence.

No external services required; runs entirely offline.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from tests.helpers import complete_graph, path_graph
from treecodec.core.errors import DisconnectedGraphError, ModelFormatError
from treecodec.models.graph import Graph
from treecodec.models.sequence import DecisionKind, PendingDecision
from treecodec.schemas.model_document import CountRecord, ModelDocument
from treecodec.services.decision_model import (
    END,
    DecisionModel,
    count_summary,
    load_model,
    outcome_key,
    save_model,
    train_count_model,
    train_tree_model,
    uniform_model,
)

# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _edge(context: tuple[int, ...] = (0, 0)) -> PendingDecision:
    return PendingDecision(kind=DecisionKind.EDGE, context=context, outcomes=(0, 1))


def _length(a: int, b: int, terminal: bool) -> PendingDecision:
    outcomes = ((0,) if terminal else ()) + tuple(range(a, b + 1))
    return PendingDecision(
        kind=DecisionKind.TREE_LENGTH, context=(0, 1, b - a), outcomes=outcomes, base=a
    )


# ---------------------------------------------------------------------------
# Probabilities
# ---------------------------------------------------------------------------


class TestUniformModel:
    """uniform_model and masking."""

    def test_tree_length_range(self):
        probs = uniform_model(plr_cap=10).probabilities(_length(1, 2, terminal=False))
        assert probs.tolist() == pytest.approx([0.5, 0.5])

    def test_edge_is_fair(self):
        assert uniform_model().probabilities(_edge()).tolist() == pytest.approx([0.5, 0.5])

    def test_uses_default_cap(self):
        assert uniform_model().plr_cap == 10

    def test_forced_decision_costs_nothing(self):
        forced = PendingDecision(kind=DecisionKind.ADD, context=(0, 0), outcomes=(1,))
        model = uniform_model()
        assert forced.forced
        assert model.log_prob(forced, 1) == 0.0
        assert model.sample(forced, np.random.default_rng(0)) == 1

    def test_observe_ignores_forced(self):
        model = uniform_model()
        model.observe(PendingDecision(kind=DecisionKind.ADD, context=(0, 0), outcomes=(1,)), 1)
        assert model.total_observations() == 0

    def test_invalid_parameters(self):
        with pytest.raises(ValueError, match="alpha"):
            DecisionModel(alpha=0.0)
        with pytest.raises(ValueError, match="plr_cap"):
            DecisionModel(plr_cap=0)


class TestOutcomeKey:
    """Tree lengths are stored as offsets from the lower bound."""

    def test_offset(self):
        assert outcome_key(_length(2, 4, terminal=False), 3) == 1

    def test_terminal_zero(self):
        assert outcome_key(_length(1, 3, terminal=True), 0) == END

    def test_zero_below_the_root(self):
        assert outcome_key(_length(0, 3, terminal=False), 0) == 0

    def test_binary_value_unchanged(self):
        assert outcome_key(_edge(), 1) == 1


class TestCounts:
    """observe, probabilities and merge."""

    def test_smoothed_probability(self):
        model = DecisionModel(alpha=1.0)
        for _ in range(3):
            model.observe(_edge(), 1)
        # (3 + 1) / (3 + 2)
        assert model.probabilities(_edge())[1] == pytest.approx(0.8)
        assert model.probabilities(_edge()).sum() == pytest.approx(1.0)

    def test_large_alpha_approaches_uniform(self):
        model = DecisionModel(alpha=1e9)
        for _ in range(50):
            model.observe(_edge(), 1)
        assert model.probabilities(_edge())[1] == pytest.approx(0.5, abs=1e-6)

    def test_masked_outcome_gets_no_mass(self):
        model = DecisionModel(alpha=1.0)
        model.observe(_length(1, 5, terminal=False), 5)
        narrow = _length(1, 2, terminal=False)
        probs = model.probabilities(narrow)
        assert len(probs) == 2
        assert probs.sum() == pytest.approx(1.0)

    def test_merge_adds_counts(self):
        a, b = DecisionModel(), DecisionModel()
        a.observe(_edge(), 1)
        b.observe(_edge(), 1)
        b.observe(_edge(), 0)
        a.merge(b)
        assert a.count(DecisionKind.EDGE, (0, 0), 1) == 2
        assert a.count(DecisionKind.EDGE, (0, 0), 0) == 1


# ---------------------------------------------------------------------------
# Training
# ---------------------------------------------------------------------------


class TestTraining:
    """train_count_model and train_tree_model."""

    def test_triangle_edges_favour_one(self):
        model = train_count_model([complete_graph(3)], epochs=1, alpha=1.0, seed=0)
        edge_table = model.tables[DecisionKind.EDGE]
        assert edge_table
        for context, row in edge_table.items():
            assert set(row) == {1}
            assert model.probabilities(_edge(context))[1] > 0.5

    def test_same_seed_same_tables(self, small_community):
        a = train_count_model(small_community.graphs, epochs=2, seed=5)
        b = train_count_model(small_community.graphs, epochs=2, seed=5)
        assert a.tables == b.tables
        assert a.plr_cap == b.plr_cap

    def test_cap_follows_longest_path(self):
        model = train_count_model([path_graph(9)], seed=0)
        # any minimal decomposition of P9 is a path of 8 edge bags: PLR [4, 0, 0, 0, 3, 0, 0, 0]
        assert model.plr_cap == 4 + 2

    def test_counts_every_kind(self, small_community):
        summary = count_summary(train_count_model(small_community.graphs, seed=1))
        assert set(summary) == {kind.value for kind in DecisionKind}
        assert all(summary[kind] > 0 for kind in ("tree_length", "add", "edge"))

    def test_disconnected_graph_rejected(self):
        with pytest.raises(DisconnectedGraphError):
            train_count_model([Graph(n=2)])

    def test_epochs_checked(self):
        with pytest.raises(ValueError, match="epochs"):
            train_count_model([complete_graph(3)], epochs=0)

    def test_tree_model_counts_only_lengths(self):
        model = train_tree_model([path_graph(5), path_graph(7)])
        summary = count_summary(model)
        assert summary["tree_length"] > 0
        assert summary["edge"] == summary["share"] == summary["add"] == 0
        assert model.plr_cap == 3 + 2


# ---------------------------------------------------------------------------
# Persistence
# ---------------------------------------------------------------------------


class TestPersistence:
    """save_model / load_model."""

    def test_round_trip(self, tmp_path: Path, small_community):
        model = train_count_model(small_community.graphs, seed=2, alpha=0.5)
        path = tmp_path / "model.json"
        save_model(model, path, run={"command": "train"})
        loaded = load_model(path)
        assert loaded.tables == model.tables
        assert (loaded.alpha, loaded.plr_cap) == (0.5, model.plr_cap)
        assert json.loads(path.read_text())["run"] == {"command": "train"}

    def test_not_a_model(self, tmp_path: Path):
        path = tmp_path / "model.json"
        path.write_text('{"format": "something-else"}')
        with pytest.raises(ModelFormatError, match="not a model document"):
            load_model(path)

    def test_duplicate_records_rejected(self):
        record = CountRecord(kind=DecisionKind.EDGE, context=[0, 0], outcome=1, count=2)
        document = ModelDocument(alpha=1.0, plr_cap=5, records=[record, record])
        with pytest.raises(ModelFormatError, match="duplicate record"):
            DecisionModel.from_document(document)
