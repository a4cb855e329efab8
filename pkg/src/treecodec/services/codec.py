"""
Graph Codec Service

Maps a (graph, node ordering) pair to its decision sequence and back.

Encoding:
    1. minimal min-fill decomposition under the ordering, rooted canonically;
    2. the decomposition tree's PLR;
    3. per supernode in canonical order: sharing bits over the parent bag
       (parent bag in insertion order), then the bag's new nodes in ordering
       rank, each with edge bits against the members already in the bag,
       then a stop.

Decoding replays the sequence through :class:`DecisionProcess`, which
assigns fresh sequential node ids.
"""

from __future__ import annotations

import logging
from enum import StrEnum

import numpy as np

from treecodec.core.errors import SequenceFormatError
from treecodec.models.graph import Graph, Permutation
from treecodec.models.sequence import AddStep, DecisionCounts, DecisionSequence, SupernodeDecisions
from treecodec.models.tree import NO_PARENT
from treecodec.services.canon import canonical_order
from treecodec.services.decomposition import minimal_decomposition
from treecodec.services.graphs import bfs_order, dfs_order, random_permutation, require_connected
from treecodec.services.plr import plr_of_rooted
from treecodec.services.process import replay_sequence

logger = logging.getLogger(__name__)


class Ordering(StrEnum):
    BFS = "bfs"
    DFS = "dfs"


class SequenceMethod(StrEnum):
    TD = "td"
    BFS = "bfs"
    DFS = "dfs"


# ---------------------------------------------------------------------------
# Decision sequences
# ---------------------------------------------------------------------------


def encode_graph(g: Graph, perm: Permutation) -> DecisionSequence:
    """
    Decision sequence of ``g`` under the node ordering ``perm``.

    Raises:
        DisconnectedGraphError: if ``g`` is disconnected.
    """
    require_connected(g, "encode_graph")
    td = minimal_decomposition(g, perm)
    rank = perm.rank
    members_of: dict[int, list[int]] = {}
    records: list[SupernodeDecisions] = []

    for s in canonical_order(td.tree):
        bag = td.bags[s]
        parent = td.tree.parent[s]
        if parent == NO_PARENT:
            share_bits: tuple[int, ...] = ()
            members: list[int] = []
        else:
            parent_members = members_of[parent]
            share_bits = tuple(int(v in bag) for v in parent_members)
            members = [v for v in parent_members if v in bag]
            if not members:
                raise SequenceFormatError(f"supernode {s} shares no node with its parent")

        steps: list[AddStep] = []
        for v in sorted(bag.difference(members), key=rank.__getitem__):
            steps.append(AddStep(1, tuple(int(g.has_edge(v, m)) for m in members)))
            members.append(v)
        steps.append(AddStep(0))

        members_of[s] = members
        records.append(SupernodeDecisions(share_bits, tuple(steps)))

    return DecisionSequence(tree_plr=tuple(plr_of_rooted(td.tree)), supernodes=tuple(records))


def decode_graph(ds: DecisionSequence) -> Graph:
    """
    Graph described by a decision sequence (fresh sequential node ids).

    Raises:
        SequenceFormatError: on malformed bit lengths, empty sharing or a
            zero-node bag.
    """
    return replay_sequence(ds).graph


def decision_counts(ds: DecisionSequence, k: int) -> DecisionCounts:
    """
    Charged decisions per category for a sequence whose decomposition has width ``k``.

    Every tree length, sharing bit and edge bit counts; add decisions count
    except the implicit first add of each bag and the forced second add of a
    root bag with children.
    """
    r = ds.r
    add_steps = 0
    for i, node in enumerate(ds.supernodes):
        implicit = 2 if i == 0 and r > 1 else 1
        add_steps += max(len(node.add_steps) - implicit, 0)
    return DecisionCounts(
        tree_steps=r,
        sharing_steps=sum(len(node.sharing_bits) for node in ds.supernodes),
        add_steps=add_steps,
        edge_steps=sum(len(step.edge_bits) for node in ds.supernodes for step in node.add_steps),
        n=ds.node_count,
        r=r,
        k=k,
    )


# ---------------------------------------------------------------------------
# Baseline orderings
# ---------------------------------------------------------------------------


def adjacency_sequence(g: Graph, perm: Permutation, ordering: Ordering) -> list[int]:
    """
    Upper-triangle adjacency bits, row by row, after reordering the nodes by
    BFS or DFS from ``perm``'s first node (neighbor ties by ``perm``).
    """
    require_connected(g, "adjacency_sequence")
    if g.n == 0:
        return []
    walk = bfs_order if ordering is Ordering.BFS else dfs_order
    order = walk(g, perm.order[0], perm)
    return [
        int(g.has_edge(order[i], order[j])) for i in range(g.n) for j in range(i + 1, g.n)
    ]


def _serialize(g: Graph, perm: Permutation, method: SequenceMethod) -> bytes:
    if method is SequenceMethod.TD:
        return encode_graph(g, perm).to_bytes()
    bits = adjacency_sequence(g, perm, Ordering(method.value))
    return np.packbits(np.asarray(bits, dtype=np.uint8)).tobytes() + len(bits).to_bytes(4, "big")


def unique_sequence_count(
    g: Graph, n_perms: int, method: SequenceMethod, rng: np.random.Generator
) -> int:
    """
    Number of distinct serialized sequences over ``n_perms`` uniform random
    orderings drawn from ``rng``.
    """
    if n_perms < 1:
        raise ValueError(f"n_perms ({n_perms}) must be positive")
    require_connected(g, "unique_sequence_count")
    seen = {_serialize(g, random_permutation(g.n, rng), method) for _ in range(n_perms)}
    logger.debug("method=%s n=%d: %d distinct sequences", method, g.n, len(seen))
    return len(seen)
