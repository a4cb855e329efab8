"""
Rooted Tree Type

A rooted tree over node ids ``0..r-1`` stored as a parent array. Children
lists keep ascending id order; canonical orderings are computed on top of it
by ``treecodec.services.canon``.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property

from treecodec.core.errors import NotATreeError
from treecodec.models.graph import Graph

NO_PARENT = -1


@dataclass(frozen=True)
class RootedTree:
    """
    Rooted tree as a parent array; ``parent[root] == NO_PARENT``.

    Usage::

        t = RootedTree.from_parents([-1, 0, 0])
        t.children(0)   # (1, 2)
    """

    parent: tuple[int, ...]
    root: int

    def __post_init__(self) -> None:
        r = len(self.parent)
        if r == 0:
            raise NotATreeError("a rooted tree needs at least one node")
        if not 0 <= self.root < r or self.parent[self.root] != NO_PARENT:
            raise NotATreeError(f"root ({self.root}) must be the only parentless node")
        for v, p in enumerate(self.parent):
            if v != self.root and not 0 <= p < r:
                raise NotATreeError(f"node {v} has invalid parent {p}")
        if len(self.preorder) != r:
            raise NotATreeError("parent array contains a cycle")

    @classmethod
    def from_parents(cls, parent: Sequence[int]) -> RootedTree:
        roots = [v for v, p in enumerate(parent) if p == NO_PARENT]
        if len(roots) != 1:
            raise NotATreeError(f"expected exactly one root, found {len(roots)}")
        return cls(parent=tuple(parent), root=roots[0])

    @property
    def r(self) -> int:
        """Node count."""
        return len(self.parent)

    @cached_property
    def _children(self) -> tuple[tuple[int, ...], ...]:
        kids: list[list[int]] = [[] for _ in self.parent]
        for v, p in enumerate(self.parent):
            if p != NO_PARENT:
                kids[p].append(v)
        return tuple(tuple(k) for k in kids)

    def children(self, v: int) -> tuple[int, ...]:
        return self._children[v]

    @cached_property
    def preorder(self) -> tuple[int, ...]:
        """Preorder from the root, children in ascending id order."""
        order: list[int] = []
        stack = [self.root]
        while stack:
            v = stack.pop()
            order.append(v)
            stack.extend(reversed(self._children[v]))
        return tuple(order)

    @cached_property
    def depth(self) -> tuple[int, ...]:
        depths = [0] * len(self.parent)
        for v in self.preorder:
            if v != self.root:
                depths[v] = depths[self.parent[v]] + 1
        return tuple(depths)

    def to_graph(self) -> Graph:
        """The underlying unrooted tree."""
        return Graph.from_edges(
            self.r, ((v, p) for v, p in enumerate(self.parent) if p != NO_PARENT)
        )
