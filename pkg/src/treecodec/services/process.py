"""
Generation Process

The decision process that turns choices into a tree decomposition and a
graph. A :class:`Chooser` supplies every value; the process owns the
admissible outcome sets, the contexts, and the bookkeeping. Replaying a
recorded sequence, scoring it under a model, counting it for training and
sampling a new graph are all the same walk with a different chooser.

Walk:
    1. Tree stage: path lengths until the PLR returns to the root, masked by
       the PLR bounds (and a node budget when sampling).
    2. Graph stage, per supernode in decoded id order (the canonical DFS):
       sharing bits over the parent bag, then add steps, each added node
       followed by edge bits against the bag members present so far.

Forced outcomes:
    - the last sharing bit when all earlier bits are 0 (non-empty sharing)
      or all are 1 (the child must not contain the whole parent bag);
    - the first add of every bag, and the second add of a root bag that has
      children (a single-node root would be a subset of its child);
    - stops, when a node budget leaves no room for more nodes.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Protocol

from treecodec.core.errors import SequenceFormatError
from treecodec.models.decomposition import TreeDecomposition
from treecodec.models.graph import Graph
from treecodec.models.sequence import (
    AddStep,
    DecisionKind,
    DecisionSequence,
    PendingDecision,
    SupernodeDecisions,
)
from treecodec.models.tree import NO_PARENT, RootedTree
from treecodec.services.plr import PlrBounds, PlrState

logger = logging.getLogger(__name__)

FEATURE_CAP = 15
DEPTH_CAP = 8

BINARY = (0, 1)


class Chooser(Protocol):
    def choose(self, decision: PendingDecision) -> int: ...


@dataclass(frozen=True)
class ProcessResult:
    sequence: DecisionSequence
    graph: Graph
    decomposition: TreeDecomposition


def tree_length_context(depth: int, bounds: PlrBounds) -> tuple[int, int, int]:
    return (min(depth, DEPTH_CAP), int(bounds.a > 0), min(max(bounds.b - bounds.a, 0), FEATURE_CAP))


def _cap(value: int) -> int:
    return min(value, FEATURE_CAP)


class DecisionProcess:
    """
    Runs the generation walk against a chooser.

    Usage::

        result = DecisionProcess(chooser, plr_cap=10, max_nodes=50).run()
        result.graph, result.decomposition, result.sequence
    """

    def __init__(self, chooser: Chooser, plr_cap: int, max_nodes: int | None = None) -> None:
        if plr_cap < 1:
            raise ValueError(f"plr_cap ({plr_cap}) must be positive")
        if max_nodes is not None and max_nodes < 1:
            raise ValueError(f"max_nodes ({max_nodes}) must be positive")
        self._chooser = chooser
        self._plr_cap = plr_cap
        self._max_nodes = max_nodes

    # ------------------------------------------------------------------
    # Public API
    # ------------------------------------------------------------------

    def grow_tree(self, max_tree_nodes: int | None = None) -> PlrState:
        """Tree stage only: choose lengths until the PLR is complete."""
        state = PlrState()
        while not state.complete:
            bounds = state.bounds(self._plr_cap, max_tree_nodes)
            decision = PendingDecision(
                kind=DecisionKind.TREE_LENGTH,
                context=tree_length_context(state.extension_depth(), bounds),
                outcomes=bounds.values(),
                index=len(state.lengths),
                base=bounds.a,
            )
            state.push(self._take(decision))
        return state

    def run(self) -> ProcessResult:
        budget = None if self._max_nodes is None else max(1, self._max_nodes - 1)
        state = self.grow_tree(budget)
        tree = state.tree()
        return self._fill_bags(tree, tuple(state.lengths))

    # ------------------------------------------------------------------
    # Internal helpers
    # ------------------------------------------------------------------

    def _take(self, decision: PendingDecision) -> int:
        value = self._chooser.choose(decision)
        if value not in decision.outcomes:
            raise SequenceFormatError(
                f"{decision.kind} value {value} not in admissible {list(decision.outcomes)}"
            )
        return value

    def _share(self, supernode: int, parent_bag: list[int]) -> tuple[list[int], tuple[int, ...]]:
        size = len(parent_bag)
        members: list[int] = []
        bits: list[int] = []
        for j, node in enumerate(parent_bag):
            ones = len(members)
            outcomes = BINARY
            if j == size - 1:
                if ones == 0:
                    outcomes = (1,)
                elif ones == j:
                    outcomes = (0,)
            bit = self._take(
                PendingDecision(
                    kind=DecisionKind.SHARE,
                    context=(_cap(j), _cap(size), _cap(ones)),
                    outcomes=outcomes,
                    supernode=supernode,
                    index=j,
                    span=size,
                )
            )
            bits.append(bit)
            if bit:
                members.append(node)
        return members, tuple(bits)

    def _fill_bags(self, tree: RootedTree, plr: tuple[int, ...]) -> ProcessResult:
        r = tree.r
        bag_members: dict[int, list[int]] = {}
        records: list[SupernodeDecisions] = []
        edges: list[tuple[int, int]] = []
        n_nodes = 0

        for position, s in enumerate(tree.preorder):
            parent = tree.parent[s]
            remaining_after = r - 1 - position
            if parent == NO_PARENT:
                members: list[int] = []
                share_bits: tuple[int, ...] = ()
            else:
                parent_bag = bag_members[parent]
                if len(parent_bag) < 2:
                    raise SequenceFormatError(
                        f"supernode {parent} has a single-node bag but has children"
                    )
                members, share_bits = self._share(s, parent_bag)
            shared = len(members)

            steps: list[AddStep] = []
            while True:
                t = len(steps)
                if t == 0 or (parent == NO_PARENT and r > 1 and t == 1):
                    outcomes: tuple[int, ...] = (1,)
                elif self._max_nodes is not None and n_nodes + 1 + remaining_after > self._max_nodes:
                    outcomes = (0,)
                else:
                    outcomes = BINARY
                add = self._take(
                    PendingDecision(
                        kind=DecisionKind.ADD,
                        context=(_cap(t), _cap(shared)),
                        outcomes=outcomes,
                        supernode=s,
                        step=t,
                        index=t,
                    )
                )
                if not add:
                    steps.append(AddStep(0))
                    break

                v = n_nodes
                n_nodes += 1
                degree = 0
                edge_bits: list[int] = []
                for c, member in enumerate(members):
                    bit = self._take(
                        PendingDecision(
                            kind=DecisionKind.EDGE,
                            context=(_cap(c), _cap(degree)),
                            outcomes=BINARY,
                            supernode=s,
                            step=t,
                            index=c,
                            span=len(members),
                        )
                    )
                    edge_bits.append(bit)
                    if bit:
                        edges.append((member, v))
                        degree += 1
                steps.append(AddStep(1, tuple(edge_bits)))
                members.append(v)

            bag_members[s] = members
            records.append(SupernodeDecisions(share_bits, tuple(steps)))

        sequence = DecisionSequence(tree_plr=plr, supernodes=tuple(records))
        graph = Graph.from_edges(n_nodes, edges)
        decomposition = TreeDecomposition(
            tree=tree, bags=tuple(frozenset(bag_members[s]) for s in range(r))
        )
        return ProcessResult(sequence=sequence, graph=graph, decomposition=decomposition)


class ReplayChooser:
    """
    Plays back a recorded DecisionSequence, checking its shape as it goes.

    Usage::

        result = DecisionProcess(ReplayChooser(ds), plr_cap=ReplayChooser.cap_for(ds)).run()
    """

    def __init__(self, sequence: DecisionSequence) -> None:
        self._sequence = sequence

    @staticmethod
    def cap_for(sequence: DecisionSequence, floor: int = 1) -> int:
        return max([floor, *sequence.tree_plr])

    def choose(self, decision: PendingDecision) -> int:
        seq = self._sequence
        kind = decision.kind
        if kind is DecisionKind.TREE_LENGTH:
            if decision.index >= len(seq.tree_plr):
                raise SequenceFormatError("PLR ends before the decomposition tree is complete")
            return seq.tree_plr[decision.index]

        if decision.supernode >= len(seq.supernodes):
            raise SequenceFormatError(
                f"no decisions recorded for supernode {decision.supernode}"
            )
        node = seq.supernodes[decision.supernode]

        if kind is DecisionKind.SHARE:
            if len(node.sharing_bits) != decision.span:
                raise SequenceFormatError(
                    f"supernode {decision.supernode}: {len(node.sharing_bits)} sharing bits "
                    f"for a parent bag of {decision.span}"
                )
            value = node.sharing_bits[decision.index]
            if value not in decision.outcomes:
                problem = "empty sharing set" if decision.outcomes == (1,) else "sharing covers the whole parent bag"
                raise SequenceFormatError(f"supernode {decision.supernode}: {problem}")
            return value

        if decision.step >= len(node.add_steps):
            raise SequenceFormatError(
                f"supernode {decision.supernode}: add steps end without a stop decision"
            )
        step = node.add_steps[decision.step]
        if kind is DecisionKind.ADD:
            if step.add_bit not in decision.outcomes:
                problem = "zero-node bag" if decision.step == 0 else "root bag needs two nodes"
                raise SequenceFormatError(f"supernode {decision.supernode}: {problem}")
            return step.add_bit

        if len(step.edge_bits) != decision.span:
            raise SequenceFormatError(
                f"supernode {decision.supernode} step {decision.step}: "
                f"{len(step.edge_bits)} edge bits for {decision.span} bag members"
            )
        return step.edge_bits[decision.index]


def replay_sequence(sequence: DecisionSequence) -> ProcessResult:
    """
    Rebuild the graph and the decomposition a sequence describes.

    Raises:
        SequenceFormatError: on inconsistent section lengths, empty or full
            sharing, zero-node bags, or trailing decisions.
        InvalidPlrError: if the PLR leaves its admissible bounds.
    """
    process = DecisionProcess(ReplayChooser(sequence), plr_cap=ReplayChooser.cap_for(sequence))
    result = process.run()
    if result.sequence != sequence:
        raise SequenceFormatError("sequence has decisions beyond those the process consumed")
    return result
