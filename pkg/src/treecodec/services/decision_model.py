"""
Decision Model Service

Count-based autoregressive model over generation decisions. Each decision
kind keeps a table ``context → outcome → count``; the probability of an
admissible outcome is its smoothed count normalized over the admissible set
only, so masked outcomes get exactly zero mass.

Tree-length outcomes are stored as offsets ``ℓ - a`` from the lower bound of
the admissible range, with ``END`` standing for the terminal 0 at the root;
that way statistics are shared across different bounds.

Usage::

    model = train_count_model(graphs, epochs=1, alpha=1.0, seed=7)
    save_model(model, Path("model.json"))
    model = load_model(Path("model.json"))
"""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any, Final

import numpy as np
from pydantic import ValidationError

from treecodec.core.config import settings
from treecodec.core.errors import ModelFormatError
from treecodec.core.random import substream
from treecodec.models.graph import Graph
from treecodec.models.sequence import DecisionKind, DecisionSequence, PendingDecision
from treecodec.schemas.model_document import CountRecord, ModelDocument
from treecodec.services.codec import encode_graph
from treecodec.services.graphs import random_permutation, require_connected
from treecodec.services.plr import plr_encode
from treecodec.services.process import DecisionProcess, ReplayChooser

logger = logging.getLogger(__name__)

END: Final[int] = -1

Table = dict[tuple[int, ...], dict[int, int]]


def outcome_key(decision: PendingDecision, value: int) -> int:
    """Table key of ``value``: offsets for tree lengths, the value itself otherwise."""
    if decision.kind is DecisionKind.TREE_LENGTH:
        if value == 0 and decision.base > 0:
            return END
        return value - decision.base
    return value


class DecisionModel:
    """
    Smoothed count tables, one per decision kind.

    Args:
        alpha: Laplace smoothing added to every admissible outcome.
        plr_cap: Largest path length the model generates.
    """

    def __init__(self, alpha: float = 1.0, plr_cap: int = 10) -> None:
        if alpha <= 0:
            raise ValueError(f"alpha ({alpha}) must be positive")
        if plr_cap < 1:
            raise ValueError(f"plr_cap ({plr_cap}) must be positive")
        self.alpha = alpha
        self.plr_cap = plr_cap
        self.tables: dict[DecisionKind, Table] = {kind: {} for kind in DecisionKind}

    # ------------------------------------------------------------------
    # Probabilities
    # ------------------------------------------------------------------

    def count(self, kind: DecisionKind, context: tuple[int, ...], key: int) -> int:
        return self.tables[kind].get(context, {}).get(key, 0)

    def probabilities(self, decision: PendingDecision) -> np.ndarray:
        """Probabilities aligned with ``decision.outcomes``; sums to 1."""
        row = self.tables[decision.kind].get(decision.context, {})
        weights = np.array(
            [row.get(outcome_key(decision, o), 0) + self.alpha for o in decision.outcomes],
            dtype=np.float64,
        )
        return weights / weights.sum()

    def log_prob(self, decision: PendingDecision, value: int) -> float:
        if decision.forced:
            return 0.0
        probs = self.probabilities(decision)
        return math.log(float(probs[decision.outcomes.index(value)]))

    def sample(self, decision: PendingDecision, rng: np.random.Generator) -> int:
        if decision.forced:
            return decision.outcomes[0]
        probs = self.probabilities(decision)
        return decision.outcomes[int(rng.choice(len(probs), p=probs))]

    # ------------------------------------------------------------------
    # Counting
    # ------------------------------------------------------------------

    def observe(self, decision: PendingDecision, value: int) -> None:
        if decision.forced:
            return
        row = self.tables[decision.kind].setdefault(decision.context, {})
        key = outcome_key(decision, value)
        row[key] = row.get(key, 0) + 1

    def merge(self, other: DecisionModel) -> None:
        """Add another model's counts (order-independent)."""
        for kind, table in other.tables.items():
            for context, row in table.items():
                mine = self.tables[kind].setdefault(context, {})
                for key, value in row.items():
                    mine[key] = mine.get(key, 0) + value

    def total_observations(self) -> int:
        return sum(v for table in self.tables.values() for row in table.values() for v in row.values())

    # ------------------------------------------------------------------
    # Persistence
    # ------------------------------------------------------------------

    def to_document(self, run: dict[str, Any] | None = None) -> ModelDocument:
        records = [
            CountRecord(kind=kind, context=list(context), outcome=key, count=value)
            for kind in DecisionKind
            for context, row in sorted(self.tables[kind].items())
            for key, value in sorted(row.items())
        ]
        return ModelDocument(alpha=self.alpha, plr_cap=self.plr_cap, records=records, run=run)

    @classmethod
    def from_document(cls, document: ModelDocument) -> DecisionModel:
        model = cls(alpha=document.alpha, plr_cap=document.plr_cap)
        for record in document.records:
            row = model.tables[record.kind].setdefault(tuple(record.context), {})
            if record.outcome in row:
                raise ModelFormatError(
                    f"duplicate record {record.kind} {record.context} -> {record.outcome}"
                )
            row[record.outcome] = record.count
        return model


class CountingChooser:
    """Replays a recorded sequence and counts every charged decision into a model."""

    def __init__(self, sequence: DecisionSequence, model: DecisionModel) -> None:
        self._replay = ReplayChooser(sequence)
        self._model = model

    def choose(self, decision: PendingDecision) -> int:
        value = self._replay.choose(decision)
        self._model.observe(decision, value)
        return value


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------


def uniform_model(plr_cap: int | None = None) -> DecisionModel:
    """Model with no counts: every admissible outcome is equally likely."""
    return DecisionModel(alpha=1.0, plr_cap=plr_cap or settings.DEFAULT_PLR_CAP)


def _fitted_cap(lengths: Iterable[int]) -> int:
    return max([1, *lengths]) + settings.PLR_CAP_SLACK


def train_count_model(
    graphs: Sequence[Graph], epochs: int = 1, alpha: float = 1.0, seed: int = 0
) -> DecisionModel:
    """
    Count every charged decision of freshly permuted encodings.

    Each epoch draws one uniform ordering per graph. The model's ``plr_cap``
    is the longest path length seen plus ``PLR_CAP_SLACK``.

    Raises:
        DisconnectedGraphError: if a graph in ``graphs`` is disconnected.
    """
    if epochs < 1:
        raise ValueError(f"epochs ({epochs}) must be at least 1")
    for g in graphs:
        require_connected(g, "train_count_model")

    rng = substream(seed, "train")
    sequences = [
        encode_graph(g, random_permutation(g.n, rng)) for _ in range(epochs) for g in graphs
    ]
    model = DecisionModel(
        alpha=alpha, plr_cap=_fitted_cap(x for ds in sequences for x in ds.tree_plr)
    )
    for ds in sequences:
        DecisionProcess(CountingChooser(ds, model), plr_cap=model.plr_cap).run()

    logger.info(
        "Trained count model on %d graphs x %d epochs: %d observations, plr_cap=%d",
        len(graphs),
        epochs,
        model.total_observations(),
        model.plr_cap,
    )
    return model


def train_tree_model(trees: Sequence[Graph], alpha: float = 1.0) -> DecisionModel:
    """
    Count the tree-length decisions of the trees' own PLRs.

    PLRs do not depend on node order, so a single pass is exact.
    """
    plrs = [plr_encode(t) for t in trees]
    model = DecisionModel(alpha=alpha, plr_cap=_fitted_cap(x for plr in plrs for x in plr))
    for plr in plrs:
        ds = DecisionSequence(tree_plr=tuple(plr), supernodes=())
        DecisionProcess(CountingChooser(ds, model), plr_cap=model.plr_cap).grow_tree()
    logger.info("Trained tree model on %d trees, plr_cap=%d", len(trees), model.plr_cap)
    return model


def save_model(model: DecisionModel, path: Path, run: dict[str, Any] | None = None) -> None:
    path.write_text(model.to_document(run).model_dump_json(indent=2), encoding="utf-8")
    logger.info("Saved model to '%s'", path)


def load_model(path: Path) -> DecisionModel:
    """
    Raises:
        ModelFormatError: if the file is not a valid model document.
    """
    try:
        document = ModelDocument.model_validate_json(path.read_text(encoding="utf-8"))
    except ValidationError as exc:
        raise ModelFormatError(f"'{path}' is not a model document: {exc}") from exc
    return DecisionModel.from_document(document)


def count_summary(model: DecisionModel) -> dict[str, int]:
    """Observations per decision kind."""
    summary: dict[str, int] = defaultdict(int)
    for kind, table in model.tables.items():
        summary[kind.value] += sum(sum(row.values()) for row in table.values())
    return dict(summary)
