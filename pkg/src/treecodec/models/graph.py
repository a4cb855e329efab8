"""
Graph Domain Types

Immutable undirected simple graphs over dense node ids ``0..n-1`` and the
node orderings (permutations) that drive every order-dependent operation.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property

from treecodec.core.errors import GraphFormatError

Edge = tuple[int, int]


def normalize_edge(u: int, v: int) -> Edge:
    """Return the canonical ``(min, max)`` form of an undirected edge."""
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """
    Undirected simple labeled graph.

    Nodes are the ids ``0..n-1``. ``edges`` holds each undirected edge once
    in ``(u, v)`` form with ``u < v``; build instances through
    :meth:`from_edges` to get that normalization and duplicate collapse.

    Usage::

        g = Graph.from_edges(3, [(0, 1), (2, 1)])
        g.neighbors(1)   # (0, 2)
    """

    n: int
    edges: frozenset[Edge] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise GraphFormatError(f"node count ({self.n}) must be non-negative")
        for u, v in self.edges:
            if u == v:
                raise GraphFormatError(f"self-loop on node {u}")
            if u > v:
                raise GraphFormatError(f"edge ({u}, {v}) is not normalized")
            if u < 0 or v >= self.n:
                raise GraphFormatError(
                    f"edge ({u}, {v}) has an endpoint outside 0..{self.n - 1}"
                )

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        """Build a graph from unordered pairs; duplicates collapse to one edge."""
        normalized: set[Edge] = set()
        for u, v in edges:
            if u == v:
                raise GraphFormatError(f"self-loop on node {u}")
            normalized.add(normalize_edge(int(u), int(v)))
        return cls(n=n, edges=frozenset(normalized))

    # ------------------------------------------------------------------
    # Adjacency
    # ------------------------------------------------------------------

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        """Neighbor sets indexed by node id."""
        nbrs: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(frozenset(s) for s in nbrs)

    def neighbors(self, v: int) -> tuple[int, ...]:
        """Sorted neighbor ids of ``v``."""
        return tuple(sorted(self.adjacency[v]))

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return normalize_edge(u, v) in self.edges

    @cached_property
    def is_connected(self) -> bool:
        """True iff node 0 reaches every node (n ≤ 1 counts as connected)."""
        if self.n <= 1:
            return True
        seen = {0}
        stack = [0]
        while stack:
            for w in self.adjacency[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    @property
    def m(self) -> int:
        """Edge count."""
        return len(self.edges)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)


@dataclass(frozen=True)
class Permutation:
    """
    A node ordering: ``order[i]`` is the node placed at position ``i``.

    ``rank`` is the inverse map (node id → position) and is what tie-breaking
    code compares.
    """

    order: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.order) != list(range(len(self.order))):
            raise GraphFormatError(
                f"permutation {list(self.order)} is not a bijection on 0..{len(self.order) - 1}"
            )

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(order=tuple(range(n)))

    @classmethod
    def of(cls, order: Sequence[int]) -> Permutation:
        return cls(order=tuple(int(v) for v in order))

    @cached_property
    def rank(self) -> tuple[int, ...]:
        ranks = [0] * len(self.order)
        for position, node in enumerate(self.order):
            ranks[node] = position
        return tuple(ranks)

    def __len__(self) -> int:
        return len(self.order)
