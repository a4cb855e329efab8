"""
Lobster Predicate

A lobster is a tree whose nodes all lie within distance two of a central
path: removing every leaf twice leaves a path (possibly a single node or
nothing).
"""

from __future__ import annotations

import logging
from collections.abc import Sequence

from treecodec.models.graph import Graph
from treecodec.services.graphs import is_tree

logger = logging.getLogger(__name__)


def _strip_leaves(g: Graph, alive: set[int]) -> set[int]:
    return {v for v in alive if len(g.adjacency[v] & alive) > 1}


def is_lobster(g: Graph) -> bool:
    if not is_tree(g):
        return False
    backbone = _strip_leaves(g, _strip_leaves(g, set(range(g.n))))
    return all(len(g.adjacency[v] & backbone) <= 2 for v in backbone)


def lobster_accuracy(graphs: Sequence[Graph]) -> float:
    """Fraction of ``graphs`` that are lobsters."""
    if not graphs:
        raise ValueError("lobster accuracy of an empty set is undefined")
    hits = sum(1 for g in graphs if is_lobster(g))
    logger.debug("Lobster accuracy: %d / %d", hits, len(graphs))
    return hits / len(graphs)
