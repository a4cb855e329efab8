"""
Likelihood Service

Negative log-likelihood of graphs and trees under a decision model.

For a graph the NLL depends on the node ordering, so ``nll`` scores the
sequences of several uniform orderings and reports their mean (expected
NLL), the standard error of that mean, and the marginal estimate
``-log Σ p(S)`` over the distinct sequences observed. Natural log
throughout.
"""

from __future__ import annotations

import logging
import math
from typing import NamedTuple

import numpy as np

from treecodec.core.errors import SequenceFormatError
from treecodec.models.graph import Graph
from treecodec.models.sequence import DecisionSequence, PendingDecision
from treecodec.services.codec import encode_graph
from treecodec.services.decision_model import DecisionModel
from treecodec.services.graphs import random_permutation, require_connected
from treecodec.services.plr import plr_encode
from treecodec.services.process import DecisionProcess, ReplayChooser

logger = logging.getLogger(__name__)


class NllResult(NamedTuple):
    per_perm: list[float]
    expected: float
    marginal: float
    std_error: float
    distinct: int


class ScoringChooser:
    """Replays a recorded sequence and accumulates its log-probability."""

    def __init__(self, sequence: DecisionSequence, model: DecisionModel) -> None:
        self._replay = ReplayChooser(sequence)
        self._model = model
        self.log_prob = 0.0

    def choose(self, decision: PendingDecision) -> int:
        value = self._replay.choose(decision)
        self.log_prob += self._model.log_prob(decision, value)
        return value


def _scoring_cap(model: DecisionModel, lengths: tuple[int, ...]) -> int:
    longest = max(lengths, default=0)
    if longest > model.plr_cap:
        logger.warning(
            "Path length %d exceeds the model cap %d; widening the cap for scoring",
            longest,
            model.plr_cap,
        )
        return longest
    return model.plr_cap


def sequence_nll(model: DecisionModel, ds: DecisionSequence) -> float:
    """``-log p(ds)``; forced decisions contribute nothing."""
    chooser = ScoringChooser(ds, model)
    DecisionProcess(chooser, plr_cap=_scoring_cap(model, ds.tree_plr)).run()
    return -chooser.log_prob


def tree_nll(model: DecisionModel, tree: Graph) -> float:
    """``-log p`` of a tree's PLR under the tree-length table."""
    plr = tuple(plr_encode(tree))
    chooser = ScoringChooser(DecisionSequence(tree_plr=plr, supernodes=()), model)
    state = DecisionProcess(chooser, plr_cap=_scoring_cap(model, plr)).grow_tree()
    if tuple(state.lengths) != plr:
        raise SequenceFormatError("tree PLR was not fully consumed")
    return -chooser.log_prob


def nll(model: DecisionModel, g: Graph, n_perms: int, rng: np.random.Generator) -> NllResult:
    """
    Expected and marginal NLL of ``g`` over ``n_perms`` uniform orderings.

    Raises:
        DisconnectedGraphError: if ``g`` is disconnected.
    """
    if n_perms < 1:
        raise ValueError(f"n_perms ({n_perms}) must be positive")
    require_connected(g, "nll")

    per_perm: list[float] = []
    distinct: dict[bytes, float] = {}
    for _ in range(n_perms):
        ds = encode_graph(g, random_permutation(g.n, rng))
        key = ds.to_bytes()
        if key not in distinct:
            distinct[key] = sequence_nll(model, ds)
        per_perm.append(distinct[key])

    values = np.asarray(per_perm)
    expected = float(values.mean())
    # equal values must report exactly zero spread
    spread = len(values) > 1 and np.ptp(values) > 0
    std_error = float(values.std(ddof=1) / math.sqrt(len(values))) if spread else 0.0
    marginal = -float(np.logaddexp.reduce(-np.fromiter(distinct.values(), dtype=np.float64)))
    return NllResult(
        per_perm=per_perm,
        expected=expected,
        # the mean of equal values can round one ulp below them
        marginal=min(marginal, expected),
        std_error=std_error,
        distinct=len(distinct),
    )
