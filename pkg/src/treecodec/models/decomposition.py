"""
Tree Decomposition Types

A tree decomposition is a rooted tree over supernode ids ``0..r-1`` plus one
bag (a set of graph nodes) per supernode. Validation reports are plain
values; they never raise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from treecodec.core.errors import DecompositionError
from treecodec.models.tree import NO_PARENT, RootedTree


@dataclass(frozen=True)
class TreeDecomposition:
    """
    Rooted decomposition tree with one bag per supernode.

    ``bags[i]`` is the bag of supernode ``i`` of ``tree``.
    """

    tree: RootedTree
    bags: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        if len(self.bags) != self.tree.r:
            raise DecompositionError(
                f"{len(self.bags)} bags for a tree of {self.tree.r} supernodes"
            )
        for i, bag in enumerate(self.bags):
            if not bag:
                raise DecompositionError(f"bag {i} is empty")

    @property
    def r(self) -> int:
        """Supernode count."""
        return self.tree.r

    def adjacent_pairs(self) -> list[tuple[int, int]]:
        """(child, parent) supernode pairs."""
        return [(v, p) for v, p in enumerate(self.tree.parent) if p != NO_PARENT]

    def to_text(self) -> str:
        """Structured text record: sizes, root, parent array, one bag per line."""
        lines = [
            f"supernodes {self.r}",
            f"root {self.tree.root}",
            "parents " + " ".join(str(p) for p in self.tree.parent),
        ]
        lines.extend(
            f"bag {i}: " + " ".join(str(v) for v in sorted(bag))
            for i, bag in enumerate(self.bags)
        )
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> TreeDecomposition:
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        try:
            r = int(lines[0].removeprefix("supernodes "))
            root = int(lines[1].removeprefix("root "))
            parents = tuple(int(p) for p in lines[2].removeprefix("parents ").split())
            bags: list[frozenset[int]] = []
            for i, line in enumerate(lines[3 : 3 + r]):
                head, _, body = line.partition(":")
                if head != f"bag {i}":
                    raise DecompositionError(f"expected 'bag {i}:', got '{line}'")
                bags.append(frozenset(int(v) for v in body.split()))
        except (IndexError, ValueError) as exc:
            raise DecompositionError(f"malformed decomposition record: {exc}") from exc
        if len(parents) != r or len(bags) != r:
            raise DecompositionError(f"record declares {r} supernodes but lists fewer")
        return cls(tree=RootedTree(parent=parents, root=root), bags=tuple(bags))


@dataclass(frozen=True)
class Violation:
    """One violated decomposition condition and the object that witnesses it."""

    condition: str
    witness: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(f"{v.condition}: {v.witness}" for v in self.violations)
