"""
Path-Length Representation (PLR) Codec

A PLR encodes an unlabeled tree as the lengths of the root-to-leaf path
segments met by the canonical DFS: every leaf contributes the number of
nodes on the path that leads to it, and every internal node contributes a
trailing 0 when the DFS leaves it.

Decoding is a small state machine (:class:`PlrState`):
    - ``ℓ > 0`` hangs a fresh path of ℓ nodes below the extension point and
      moves the extension point to the parent of the new leaf;
    - ``ℓ = 0`` closes the extension point and moves to its parent; closing
      the root completes the tree.

The same state answers which next lengths keep the prefix completable into a
*canonical* PLR (:meth:`PlrState.bounds`): the root must stay a center
(the two-center tie is settled by name comparison) and every node's name
must stay ≤ its left brother's. Names of closed subtrees are frozen, so a
candidate length only changes names along the extension point's ancestor
chain; those are recomputed per candidate.

Usage::

    lengths = plr_encode(tree)                    # e.g. [2, 0, 2, 0, 0]
    prefix = plr_decode_prefix(lengths)
    assert prefix.complete
    plr_bounds([2, 0], cap=10)                    # PlrBounds(a=1, b=2, ...)
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Final, NamedTuple

from treecodec.core.errors import InvalidPlrError
from treecodec.models.graph import Graph
from treecodec.models.tree import NO_PARENT, RootedTree
from treecodec.services.canon import (
    LEAF_NAME,
    canonical_names,
    canonical_rooting,
    join_name,
    name_key,
    sorted_children,
)

logger = logging.getLogger(__name__)

ROOT: Final[int] = 0
MAX_ENUMERATION_SIZE: Final[int] = 9


@dataclass(frozen=True)
class PlrBounds:
    """
    Admissible next lengths after a PLR prefix.

    Every value in ``a..b`` extends the prefix; ``terminal_zero_allowed``
    says whether a 0 at the root (which ends the PLR) is admissible too.
    ``b < a`` means no non-terminal value is left (only possible at the root,
    or when a node budget is exhausted).
    """

    a: int
    b: int
    terminal_zero_allowed: bool

    def values(self) -> tuple[int, ...]:
        """All admissible lengths in increasing order."""
        extra = (0,) if self.terminal_zero_allowed and self.a > 0 else ()
        return extra + tuple(range(self.a, self.b + 1))

    def __contains__(self, length: object) -> bool:
        if not isinstance(length, int):
            return False
        if length == 0 and self.terminal_zero_allowed:
            return True
        return self.a <= length <= self.b


class PlrPrefix(NamedTuple):
    """Result of decoding a PLR prefix."""

    tree: RootedTree
    extending_node: int | None
    complete: bool


class PlrState:
    """
    Incremental PLR decoder.

    Node ``0`` is the root; nodes get sequential ids as paths are added, so the
    decoded ids follow the canonical DFS preorder of the encoded tree.

    Usage::

        state = PlrState()
        for length in (1, 1, 1, 0):
            state.push(length)
        state.complete    # True
        state.tree()      # star with 3 leaves
    """

    def __init__(self) -> None:
        self.parent: list[int] = [NO_PARENT]
        self.children: list[list[int]] = [[]]
        self.depth: list[int] = [0]
        self.names: list[str | None] = [None]
        self.heights: list[int] = [0]
        self.lengths: list[int] = []
        self.ext: int | None = ROOT
        self.first_length: int | None = None
        self.second_length: int | None = None

    def copy(self) -> PlrState:
        other = PlrState.__new__(PlrState)
        other.parent = list(self.parent)
        other.children = [list(c) for c in self.children]
        other.depth = list(self.depth)
        other.names = list(self.names)
        other.heights = list(self.heights)
        other.lengths = list(self.lengths)
        other.ext = self.ext
        other.first_length = self.first_length
        other.second_length = self.second_length
        return other

    # ------------------------------------------------------------------
    # Public API
    # ------------------------------------------------------------------

    @property
    def node_count(self) -> int:
        return len(self.parent)

    @property
    def complete(self) -> bool:
        return self.ext is None

    def extension_depth(self) -> int:
        if self.ext is None:
            raise InvalidPlrError("PLR is already complete", index=len(self.lengths))
        return self.depth[self.ext]

    def allows(self, length: int) -> bool:
        """Whether ``length`` keeps the prefix completable into a canonical PLR."""
        if self.ext is None or length < 0:
            return False
        if length == 0:
            return self.ext != ROOT or self._terminal_allowed()
        if self.ext == ROOT and len(self.children[ROOT]) == 1:
            assert self.first_length is not None
            if not self.first_length - 1 <= length <= self.first_length:
                return False
        return self._fits(length)

    def push(self, length: int) -> None:
        """Append ``length``; raises InvalidPlrError if it is not admissible."""
        index = len(self.lengths)
        if self.ext is None:
            raise InvalidPlrError(f"entry {index} ({length}) follows a complete PLR", index=index)
        if not self.allows(length):
            raise InvalidPlrError(
                f"entry {index} ({length}) is outside the admissible bounds", index=index
            )
        self._apply(length)

    def bounds(self, cap: int, max_nodes: int | None = None) -> PlrBounds:
        """
        Admissible next lengths.

        Args:
            cap: Upper limit applied when the tree constraints leave the
                length unbounded.
            max_nodes: Optional node budget; lengths that would make a
                complete tree exceed it are excluded.
        """
        if cap < 1:
            raise ValueError(f"cap ({cap}) must be positive")
        if self.ext is None:
            raise InvalidPlrError("PLR is already complete", index=len(self.lengths))

        at_root = self.ext == ROOT
        root_children = len(self.children[ROOT])
        terminal = at_root and self._terminal_allowed()
        a = 0
        if at_root:
            a = 1
            if root_children == 1:
                assert self.first_length is not None
                a = max(1, self.first_length - 1)

        b = min(cap, self._height_limit())
        if max_nodes is not None:
            b = min(b, self._budget(max_nodes))

        # 0 away from the root only closes a node and is always admissible
        while b >= max(a, 1) and not self._fits(b):
            b -= 1
        b = max(b, a - 1) if at_root else max(b, 0)
        return PlrBounds(a=a, b=b, terminal_zero_allowed=terminal)

    def tree(self) -> RootedTree:
        """The (possibly partial) tree decoded so far."""
        return RootedTree(parent=tuple(self.parent), root=ROOT)

    # ------------------------------------------------------------------
    # Internal helpers
    # ------------------------------------------------------------------

    def _terminal_allowed(self) -> bool:
        k = len(self.children[ROOT])
        return k != 1 or self.first_length == 1

    def _name(self, v: int) -> str:
        name = self.names[v]
        assert name is not None, f"node {v} is still open"
        return name

    def _height_limit(self) -> int:
        """Necessary upper bound from left-brother heights along the chain."""
        ext = self.ext
        assert ext is not None
        limit = 1 << 30
        if self.children[ext]:
            limit = min(limit, self.heights[self.children[ext][-1]] + 1)
        u = ext
        while u != ROOT:
            siblings = self.children[self.parent[u]]
            if len(siblings) >= 2:
                distance = self.depth[ext] - self.depth[u]
                limit = min(limit, self.heights[siblings[-2]] - distance)
            u = self.parent[u]
        if ext == ROOT and len(self.children[ROOT]) == 1:
            assert self.first_length is not None
            limit = min(limit, self.first_length)
        return limit

    def _budget(self, max_nodes: int) -> int:
        count = self.node_count
        k = len(self.children[ROOT])
        if self.ext == ROOT and k == 0:
            return max_nodes // 2
        if k == 1 and self.ext != ROOT and self.first_length is not None:
            return max_nodes - count - (self.first_length - 1)
        return max_nodes - count

    def _fits(self, length: int) -> bool:
        """Left-brother dominance and the two-center rule for a path of ``length``."""
        ext = self.ext
        assert ext is not None
        name = "a" * length + "b" * length
        kids = self.children[ext]
        if kids and name_key(name) > name_key(self._name(kids[-1])):
            return False
        # name of ext with the new child attached
        name = join_name([self._name(c) for c in kids] + [name])

        u = ext
        while u != ROOT:
            siblings = self.children[self.parent[u]]
            if len(siblings) >= 2 and name_key(name) > name_key(self._name(siblings[-2])):
                return False
            if self.parent[u] == ROOT:
                break
            name = join_name([self._name(c) for c in siblings[:-1]] + [name])
            u = self.parent[u]

        root_kids = self.children[ROOT]
        if ext == ROOT:
            if len(root_kids) == 0:
                return True
            second = self.second_length if len(root_kids) >= 2 else length
            others = [self._name(c) for c in root_kids[1:]] + ["a" * length + "b" * length]
        else:
            if len(root_kids) < 2:
                return True
            second = self.second_length
            # u is the open root child; `name` is its updated name
            others = [self._name(c) for c in root_kids[1:-1]] + [name]
        assert self.first_length is not None
        if second != self.first_length - 1:
            return True
        return name_key(self._name(root_kids[0])) >= name_key(join_name(others))

    def _new_node(self, parent: int) -> int:
        v = len(self.parent)
        self.parent.append(parent)
        self.children.append([])
        self.children[parent].append(v)
        self.depth.append(self.depth[parent] + 1)
        self.names.append(None)
        self.heights.append(0)
        return v

    def _close(self, v: int) -> None:
        kids = self.children[v]
        if kids:
            self.names[v] = join_name([self._name(c) for c in kids])
            self.heights[v] = 1 + max(self.heights[c] for c in kids)
        else:
            self.names[v] = LEAF_NAME
            self.heights[v] = 0

    def _apply(self, length: int) -> None:
        ext = self.ext
        assert ext is not None
        self.lengths.append(length)
        if length > 0:
            if ext == ROOT:
                k = len(self.children[ROOT])
                if k == 0:
                    self.first_length = length
                elif k == 1:
                    self.second_length = length
            u = ext
            for _ in range(length):
                u = self._new_node(u)
            self._close(u)
            self.ext = self.parent[u]
        else:
            self._close(ext)
            self.ext = None if ext == ROOT else self.parent[ext]


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------


def plr_encode(g: Graph) -> list[int]:
    """
    PLR of a free tree: rooted at its canonical root, children visited by
    non-increasing canonical name.

    Raises:
        NotATreeError: if ``g`` is not a tree.
    """
    t = canonical_rooting(g)
    return plr_of_rooted(t)


def plr_of_rooted(t: RootedTree) -> list[int]:
    """PLR of a rooted tree (the caller is responsible for the rooting)."""
    names = canonical_names(t)
    lengths: list[int] = []
    stack: list[tuple[int, int, list[int]]] = [
        (t.root, 0, sorted_children(t, t.root, names))
    ]
    while stack:
        node, pending, remaining = stack[-1]
        if not remaining:
            lengths.append(pending)
            stack.pop()
            continue
        child = remaining.pop(0)
        stack[-1] = (node, 0, remaining)
        stack.append((child, pending + 1, sorted_children(t, child, names)))
    return lengths


def plr_decode_prefix(prefix: Sequence[int]) -> PlrPrefix:
    """
    Replay a PLR prefix.

    Raises:
        InvalidPlrError: at the first entry outside its admissible bounds
            (``error.index`` is the offending position).
    """
    state = PlrState()
    for length in prefix:
        state.push(int(length))
    return PlrPrefix(tree=state.tree(), extending_node=state.ext, complete=state.complete)


def plr_bounds(prefix: Sequence[int], cap: int) -> PlrBounds:
    """Admissible next lengths after ``prefix``."""
    state = PlrState()
    for length in prefix:
        state.push(int(length))
    return state.bounds(cap)


def plr_is_valid(seq: Sequence[int]) -> bool:
    """True iff ``seq`` is a complete canonical PLR."""
    state = PlrState()
    try:
        for length in seq:
            state.push(int(length))
    except InvalidPlrError:
        return False
    return state.complete


def plr_decode(seq: Sequence[int]) -> RootedTree:
    """Decode a complete PLR into its rooted tree."""
    prefix = plr_decode_prefix(seq)
    if not prefix.complete:
        raise InvalidPlrError(f"PLR {format_plr(seq)} does not return to the root")
    return prefix.tree


def enumerate_valid_plrs(r: int) -> set[tuple[int, ...]]:
    """
    All canonical PLRs of exactly ``r`` entries, one per unlabeled tree on
    ``r`` nodes, by bounds-driven depth-first expansion.
    """
    if not 1 <= r <= MAX_ENUMERATION_SIZE:
        raise ValueError(f"r ({r}) must lie in 1..{MAX_ENUMERATION_SIZE}")
    found: set[tuple[int, ...]] = set()
    stack = [PlrState()]
    while stack:
        state = stack.pop()
        if state.complete:
            if state.node_count == r:
                found.add(tuple(state.lengths))
            continue
        for length in state.bounds(cap=r, max_nodes=r).values():
            child = state.copy()
            child._apply(length)
            stack.append(child)
    logger.debug("Enumerated %d PLRs of length %d", len(found), r)
    return found


def format_plr(seq: Sequence[int]) -> str:
    return ",".join(str(int(x)) for x in seq)


def parse_plr(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        values = [int(tok) for tok in text.split(",")]
    except ValueError as exc:
        raise InvalidPlrError(f"'{text}' is not a comma-separated integer list") from exc
    if any(v < 0 for v in values):
        raise InvalidPlrError(f"'{text}' contains a negative length")
    return values
