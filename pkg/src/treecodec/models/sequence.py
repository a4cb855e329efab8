"""
Decision Sequence Types

The decision record of one (graph, ordering) pair: the decomposition tree's
PLR followed, per supernode in canonical order, by the node-sharing bits over
the parent bag and the node-adding steps with their edge bits.

Text form (one line per section)::

    plr 1,0
    node 0 share - add 1: 1:1 0
    node 1 share 01 add 1:1 0

``share -`` marks the root (no parent bag). Each ``add`` token is either
``1:<edge bits>`` (a node was added; its edge bits against the bag members
already present, possibly empty) or ``0`` (stop).

Byte form (used to count distinct sequences): unsigned LEB128 varints for
every length and count, with bit strings packed MSB-first.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from enum import StrEnum
from typing import NamedTuple

import numpy as np

from treecodec.core.errors import SequenceFormatError

Bits = tuple[int, ...]


class DecisionKind(StrEnum):
    TREE_LENGTH = "tree_length"
    SHARE = "share"
    ADD = "add"
    EDGE = "edge"


class AddStep(NamedTuple):
    """One node-adding decision and, when a node was added, its edge bits."""

    add_bit: int
    edge_bits: Bits = ()


@dataclass(frozen=True)
class SupernodeDecisions:
    sharing_bits: Bits
    add_steps: tuple[AddStep, ...]

    @property
    def new_nodes(self) -> int:
        return sum(step.add_bit for step in self.add_steps)


@dataclass(frozen=True)
class DecisionSequence:
    """Full decision record; supernodes are listed root first in canonical order."""

    tree_plr: tuple[int, ...]
    supernodes: tuple[SupernodeDecisions, ...]

    @property
    def r(self) -> int:
        return len(self.tree_plr)

    @property
    def node_count(self) -> int:
        return sum(s.new_nodes for s in self.supernodes)

    # ------------------------------------------------------------------
    # Text form
    # ------------------------------------------------------------------

    def to_text(self) -> str:
        lines = ["plr " + ",".join(str(x) for x in self.tree_plr)]
        for i, node in enumerate(self.supernodes):
            share = _bits_str(node.sharing_bits) if i > 0 else "-"
            steps = " ".join(
                f"1:{_bits_str(s.edge_bits)}" if s.add_bit else "0" for s in node.add_steps
            )
            lines.append(f"node {i} share {share} add {steps}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> DecisionSequence:
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("plr"):
            raise SequenceFormatError("decision sequence text must start with a 'plr' line")
        body = lines[0].removeprefix("plr").strip()
        try:
            plr = tuple(int(x) for x in body.split(",")) if body else ()
        except ValueError as exc:
            raise SequenceFormatError(f"malformed PLR line '{lines[0]}'") from exc

        supernodes: list[SupernodeDecisions] = []
        for expected, line in enumerate(lines[1:]):
            tokens = line.split()
            if (
                len(tokens) < 5
                or tokens[0] != "node"
                or tokens[1] != str(expected)
                or tokens[2] != "share"
                or tokens[4] != "add"
            ):
                raise SequenceFormatError(f"malformed supernode line '{line}'")
            share = () if tokens[3] == "-" else _parse_bits(tokens[3])
            steps: list[AddStep] = []
            for token in tokens[5:]:
                if token == "0":
                    steps.append(AddStep(0))
                elif token.startswith("1:"):
                    steps.append(AddStep(1, _parse_bits(token[2:])))
                else:
                    raise SequenceFormatError(f"malformed add token '{token}'")
            supernodes.append(SupernodeDecisions(share, tuple(steps)))
        return cls(tree_plr=plr, supernodes=tuple(supernodes))

    # ------------------------------------------------------------------
    # Byte form
    # ------------------------------------------------------------------

    def to_bytes(self) -> bytes:
        out = bytearray()
        _put_varint(out, len(self.tree_plr))
        for length in self.tree_plr:
            _put_varint(out, length)
        _put_varint(out, len(self.supernodes))
        for node in self.supernodes:
            _put_bits(out, node.sharing_bits)
            _put_varint(out, len(node.add_steps))
            for step in node.add_steps:
                out.append(step.add_bit)
                _put_bits(out, step.edge_bits)
        return bytes(out)


def _bits_str(bits: Bits) -> str:
    return "".join(str(b) for b in bits)


def _parse_bits(text: str) -> Bits:
    if any(ch not in "01" for ch in text):
        raise SequenceFormatError(f"'{text}' is not a bit string")
    return tuple(int(ch) for ch in text)


def _put_varint(out: bytearray, value: int) -> None:
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return


def _put_bits(out: bytearray, bits: Sequence[int]) -> None:
    _put_varint(out, len(bits))
    if bits:
        out.extend(np.packbits(np.asarray(bits, dtype=np.uint8)).tobytes())


@dataclass(frozen=True)
class DecisionCounts:
    """
    Charged decisions per category, plus the sizes needed to check the
    worst-case accounting bounds.
    """

    tree_steps: int
    sharing_steps: int
    add_steps: int
    edge_steps: int
    n: int
    r: int
    k: int

    @property
    def total(self) -> int:
        return self.tree_steps + self.sharing_steps + self.add_steps + self.edge_steps

    def within_bounds(self) -> bool:
        n, r, k = self.n, self.r, self.k
        return (
            self.tree_steps == r
            and self.sharing_steps <= (r - 1) * k
            and self.edge_steps <= n * (k - 1)
            and self.add_steps <= 2 * n
            and self.total <= r + (r - 1) * k + 2 * n + n * (k - 1)
        )


@dataclass(frozen=True)
class PendingDecision:
    """
    One decision the generation process is about to take.

    ``outcomes`` are the admissible values in increasing order; a decision
    with a single admissible value is forced and is never charged.
    ``supernode`` / ``step`` / ``index`` locate the value inside a
    DecisionSequence, and ``span`` is the length of the section it belongs to.
    """

    kind: DecisionKind
    context: tuple[int, ...]
    outcomes: tuple[int, ...]
    supernode: int = -1
    step: int = 0
    index: int = 0
    span: int = 0
    base: int = 0

    @property
    def forced(self) -> bool:
        return len(self.outcomes) == 1
