"""
Sampling Service

Draws graphs and trees from a decision model. Every admissible-set rule of
the generation process applies, so each sampled tree is a canonical PLR and
each sampled graph comes with a valid, minimal decomposition.

Masks alone do not make the graph connected (an added node may take no
edge), so ``sample_graph`` redraws from fresh substreams until the result is
connected, up to ``MAX_SAMPLE_ATTEMPTS``.
"""

from __future__ import annotations

import logging

import numpy as np

from treecodec.core.config import settings
from treecodec.core.errors import SamplingError
from treecodec.core.random import substream
from treecodec.models.graph import Graph
from treecodec.models.sequence import PendingDecision
from treecodec.services.decision_model import DecisionModel
from treecodec.services.graphs import is_connected
from treecodec.services.process import DecisionProcess, ProcessResult

logger = logging.getLogger(__name__)


class SamplingChooser:
    def __init__(self, model: DecisionModel, rng: np.random.Generator) -> None:
        self._model = model
        self._rng = rng

    def choose(self, decision: PendingDecision) -> int:
        return self._model.sample(decision, self._rng)


def sample_process(
    model: DecisionModel,
    plr_cap: int,
    max_nodes: int,
    seed: int,
    index: int = 0,
    max_attempts: int | None = None,
) -> ProcessResult:
    """
    One connected sample with its sequence and decomposition.

    Raises:
        SamplingError: if no connected graph appears within ``max_attempts``.
    """
    attempts = max_attempts or settings.MAX_SAMPLE_ATTEMPTS
    for attempt in range(attempts):
        rng = substream(seed, "sample", index, attempt)
        result = DecisionProcess(SamplingChooser(model, rng), plr_cap, max_nodes).run()
        if is_connected(result.graph):
            if attempt:
                logger.debug("Sample %d connected after %d redraws", index, attempt)
            return result
    raise SamplingError(f"sample {index}: no connected graph in {attempts} attempts")


def sample_graph(
    model: DecisionModel,
    plr_cap: int,
    max_nodes: int,
    seed: int,
    index: int = 0,
    max_attempts: int | None = None,
) -> Graph:
    """Connected graph with at most ``max_nodes`` nodes."""
    return sample_process(model, plr_cap, max_nodes, seed, index, max_attempts).graph


def sample_tree(model: DecisionModel, plr_cap: int, max_nodes: int, seed: int, index: int = 0) -> Graph:
    """Tree from the tree-length stage alone, with at most ``max_nodes`` nodes."""
    rng = substream(seed, "sample-tree", index)
    state = DecisionProcess(SamplingChooser(model, rng), plr_cap).grow_tree(max_nodes)
    return state.tree().to_graph()
