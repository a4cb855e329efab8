"""
Tree Canonicalization Service

Canonical names of rooted trees, canonical root selection for free trees,
canonical DFS ordering, and tree isomorphism by name comparison.

Naming convention:
    - a leaf is named ``"ab"``
    - an internal node is ``"a"`` + its children's names concatenated in
      NON-INCREASING lexicographic order + ``"b"``
    - names compare lexicographically with ``"a"`` ranking above ``"b"``
      (:func:`name_key`), so growing a subtree never lowers its name

The same non-increasing order drives the canonical DFS, so a node's left
brother always carries a name ≥ its own. Equal-name siblings are ordered by
smaller node id.
"""

from __future__ import annotations

import logging
from collections import deque
from collections.abc import Sequence

from treecodec.core.errors import NotATreeError
from treecodec.models.graph import Graph
from treecodec.models.tree import NO_PARENT, RootedTree
from treecodec.services.graphs import enumerate_labeled_trees, is_tree

logger = logging.getLogger(__name__)

LEAF_NAME = "ab"

_RANKED = str.maketrans("ab", "ba")


def require_tree(g: Graph) -> None:
    if not is_tree(g):
        raise NotATreeError(f"graph with n={g.n}, m={g.m} is not a tree")


def root_tree(g: Graph, root: int) -> RootedTree:
    """Orient a free tree away from ``root``."""
    require_tree(g)
    parent = [NO_PARENT] * g.n
    seen = [False] * g.n
    seen[root] = True
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in g.adjacency[u]:
            if not seen[w]:
                seen[w] = True
                parent[w] = u
                queue.append(w)
    return RootedTree(parent=tuple(parent), root=root)


# ---------------------------------------------------------------------------
# Names
# ---------------------------------------------------------------------------


def name_key(name: str) -> str:
    """Sort key of a canonical name; ``"a"`` ranks above ``"b"``."""
    return name.translate(_RANKED)


def join_name(child_names: Sequence[str]) -> str:
    """Name of a node whose children carry ``child_names`` (any order)."""
    return "a" + "".join(sorted(child_names, key=name_key, reverse=True)) + "b"


def canonical_names(t: RootedTree) -> list[str]:
    """Names of every node, computed bottom-up."""
    names = [""] * t.r
    for v in reversed(t.preorder):
        names[v] = join_name([names[c] for c in t.children(v)])
    return names


def canonical_name(t: RootedTree, v: int) -> str:
    if not 0 <= v < t.r:
        raise NotATreeError(f"node {v} is not in a tree of {t.r} nodes")
    return canonical_names(t)[v]


def sorted_children(t: RootedTree, v: int, names: Sequence[str]) -> list[int]:
    """Children of ``v`` by non-increasing name, equal names by smaller id."""
    return sorted(t.children(v), key=lambda c: name_key(names[c]), reverse=True)


# ---------------------------------------------------------------------------
# Roots and orderings
# ---------------------------------------------------------------------------


def tree_centers(g: Graph) -> list[int]:
    """One or two centers, found by repeatedly stripping all leaves."""
    require_tree(g)
    if g.n <= 2:
        return list(range(g.n))
    degree = [g.degree(v) for v in range(g.n)]
    layer = [v for v in range(g.n) if degree[v] == 1]
    remaining = g.n
    while remaining > 2:
        remaining -= len(layer)
        next_layer: list[int] = []
        for leaf in layer:
            for w in g.adjacency[leaf]:
                degree[w] -= 1
                if degree[w] == 1:
                    next_layer.append(w)
        layer = next_layer
    return sorted(layer)


def canonical_root(g: Graph) -> int:
    """
    The center of the tree; with two centers, the one whose rooted name is
    greater, and the smaller id when both names are equal.
    """
    centers = tree_centers(g)
    if len(centers) == 1:
        return centers[0]
    first, second = centers
    name_first = canonical_names(root_tree(g, first))[first]
    name_second = canonical_names(root_tree(g, second))[second]
    return second if name_key(name_second) > name_key(name_first) else first


def canonical_rooting(g: Graph) -> RootedTree:
    """The tree rooted at its canonical root."""
    return root_tree(g, canonical_root(g))


def canonical_order(t: RootedTree) -> list[int]:
    """DFS preorder visiting children by non-increasing canonical name."""
    names = canonical_names(t)
    order: list[int] = []
    stack = [t.root]
    while stack:
        v = stack.pop()
        order.append(v)
        stack.extend(reversed(sorted_children(t, v, names)))
    return order


def tree_name(g: Graph) -> str:
    """Isomorphism-class name of a free tree: its name from the canonical root."""
    rooted = canonical_rooting(g)
    return canonical_names(rooted)[rooted.root]


def tree_isomorphic(t1: Graph, t2: Graph) -> bool:
    require_tree(t1)
    require_tree(t2)
    return t1.n == t2.n and tree_name(t1) == tree_name(t2)


def count_tree_classes(n: int) -> int:
    """Number of unlabeled trees on ``n`` nodes, by brute force over Prüfer sequences."""
    names = {tree_name(t) for t in enumerate_labeled_trees(n)}
    logger.debug("Found %d tree classes on %d nodes", len(names), n)
    return len(names)
