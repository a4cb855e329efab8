"""
Tree Decomposition Service

Builds, minimizes and checks tree decompositions.

    - ``min_fill_decomposition``: greedy elimination, each step removing the
      node whose neighborhood needs the fewest fill edges (ties by a caller
      permutation); the bag is the node plus its current neighbors, and it
      hangs below the bag of its earliest-eliminated neighbor.
    - ``minimize_decomposition``: contracts adjacent bags where one is a
      subset of the other, scanning supernodes in canonical order and
      restarting after every merge until no such pair is left.
    - ``bfs_layer_decomposition``: path decomposition with bags
      ``L_{i-1} ∪ L_i`` over BFS layers.

Every decomposition produced here is rooted at the canonical root of its
tree so downstream code can rely on a parent relation.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from typing import NamedTuple

from treecodec.core.errors import DecompositionError, GraphFormatError
from treecodec.models.decomposition import TreeDecomposition, ValidationReport, Violation
from treecodec.models.graph import Graph, Permutation
from treecodec.models.tree import NO_PARENT
from treecodec.services.canon import canonical_order, canonical_rooting
from treecodec.services.graphs import bfs_layers, require_connected

logger = logging.getLogger(__name__)


class DecompositionProfile(NamedTuple):
    """Size statistics of one minimal decomposition."""

    n: int
    r: int
    width: int
    bag_sizes: tuple[int, ...]
    new_nodes: tuple[int, ...]

    @property
    def slack(self) -> int:
        """``n - k + 1 - r``; never negative for minimal decompositions."""
        return self.n - self.width + 1 - self.r


# ---------------------------------------------------------------------------
# Internal helpers
# ---------------------------------------------------------------------------


def _rooted(bags: Sequence[frozenset[int]], links: Iterable[tuple[int, int]]) -> TreeDecomposition:
    """Assemble a decomposition over supernodes ``0..r-1`` rooted canonically."""
    tree_graph = Graph.from_edges(len(bags), links)
    return TreeDecomposition(tree=canonical_rooting(tree_graph), bags=tuple(bags))


def _fill_count(nbrs: dict[int, set[int]], v: int, limit: int) -> int:
    """Missing edges among the neighbors of ``v``; stops early past ``limit``."""
    around = nbrs[v]
    twice = 0
    for u in around:
        # `around` contains u itself but u is not its own neighbor
        twice += len(around - nbrs[u]) - 1
        if twice > 2 * limit:
            break
    return twice // 2


def _is_clique(nbrs: dict[int, set[int]]) -> bool:
    size = len(nbrs)
    return all(len(adj) == size - 1 for adj in nbrs.values())


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------


def min_fill_decomposition(g: Graph, tie_order: Permutation) -> TreeDecomposition:
    """
    Tree decomposition by the min-fill elimination heuristic.

    Raises:
        DisconnectedGraphError: if ``g`` is disconnected.
    """
    if g.n == 0:
        raise GraphFormatError("cannot decompose the empty graph")
    if len(tie_order) != g.n:
        raise GraphFormatError(f"tie order of size {len(tie_order)} for graph with n={g.n}")
    require_connected(g, "min_fill_decomposition")

    rank = tie_order.rank
    nbrs = {v: set(g.adjacency[v]) for v in range(g.n)}
    bags: list[frozenset[int]] = []
    eliminated_in: dict[int, int] = {}
    eliminated_nbrs: list[set[int]] = []

    while nbrs:
        if _is_clique(nbrs):
            final = len(bags)
            bags.append(frozenset(nbrs))
            for v in nbrs:
                eliminated_in[v] = final
            eliminated_nbrs.append(set())
            break

        best, best_fill = -1, g.n * g.n
        for v in sorted(nbrs, key=rank.__getitem__):
            fill = _fill_count(nbrs, v, best_fill)
            if fill < best_fill:
                best, best_fill = v, fill
                if fill == 0:
                    break

        around = nbrs.pop(best)
        for u in around:
            nbrs[u].discard(best)
            nbrs[u] |= around - {u}
        eliminated_in[best] = len(bags)
        bags.append(frozenset(around | {best}))
        eliminated_nbrs.append(around)

    links: list[tuple[int, int]] = []
    for i, around in enumerate(eliminated_nbrs):
        if around:
            links.append((i, min(eliminated_in[u] for u in around)))

    td = _rooted(bags, links)
    logger.debug("Min-fill decomposition: n=%d r=%d width=%d", g.n, td.r, width(td))
    return td


def _running_intersection_violations(td: TreeDecomposition) -> list[Violation]:
    holders: dict[int, list[int]] = {}
    for i, bag in enumerate(td.bags):
        for v in bag:
            holders.setdefault(v, []).append(i)
    violations = []
    for v, supernodes in sorted(holders.items()):
        members = set(supernodes)
        # a connected subtree has exactly one member whose parent is outside it
        tops = [i for i in supernodes if td.tree.parent[i] not in members]
        if len(tops) != 1:
            violations.append(
                Violation(
                    condition="running intersection",
                    witness=f"node {v}: supernodes {sorted(members)} are not connected",
                )
            )
    return violations


def validate_decomposition(g: Graph, td: TreeDecomposition) -> ValidationReport:
    """Check coverage, edge coverage and running intersection; never raises."""
    violations: list[Violation] = []
    covered = frozenset().union(*td.bags)
    for v in range(g.n):
        if v not in covered:
            violations.append(Violation("coverage", f"node {v} is in no bag"))
    for v in sorted(covered - frozenset(range(g.n))):
        violations.append(Violation("coverage", f"bags contain unknown node {v}"))
    for u, v in g.sorted_edges():
        if not any(u in bag and v in bag for bag in td.bags):
            violations.append(Violation("edge coverage", f"edge ({u},{v}) uncovered"))
    violations.extend(_running_intersection_violations(td))
    return ValidationReport(violations=tuple(violations))


def width(td: TreeDecomposition) -> int:
    """Largest bag size (bag size, not size minus one)."""
    return max(len(bag) for bag in td.bags)


def is_minimal(td: TreeDecomposition) -> bool:
    """True iff no bag is a subset of an adjacent bag."""
    return not any(
        td.bags[c] <= td.bags[p] or td.bags[p] <= td.bags[c] for c, p in td.adjacent_pairs()
    )


def minimize_decomposition(td: TreeDecomposition) -> TreeDecomposition:
    """
    Merge adjacent subset bags until none remain.

    Raises:
        DecompositionError: if ``td`` violates running intersection.
    """
    problems = _running_intersection_violations(td)
    if problems:
        raise DecompositionError(f"cannot minimize an invalid decomposition: {problems[0].witness}")

    bags = list(td.bags)
    links = {(min(c, p), max(c, p)) for c, p in td.adjacent_pairs()}
    merges = 0

    while True:
        current = _rooted(bags, links)
        order = canonical_order(current.tree)
        position = {s: i for i, s in enumerate(order)}
        neighbors: dict[int, list[int]] = {s: [] for s in order}
        for s, t in links:
            neighbors[s].append(t)
            neighbors[t].append(s)

        pair = next(
            (
                (s, t)
                for s in order
                for t in sorted(neighbors[s], key=position.__getitem__)
                if bags[s] <= bags[t] or bags[t] <= bags[s]
            ),
            None,
        )
        if pair is None:
            break

        keep, drop = pair
        merges += 1
        bags[keep] = bags[keep] | bags[drop]
        # contract the (keep, drop) edge, then renumber supernodes densely
        renumber = {old: new for new, old in enumerate(i for i in range(len(bags)) if i != drop)}
        renumber[drop] = renumber[keep]
        links = {
            (min(renumber[s], renumber[t]), max(renumber[s], renumber[t]))
            for s, t in links
            if {s, t} != {keep, drop}
        }
        bags = [bags[i] for i in range(len(bags)) if i != drop]

    logger.debug("Minimized decomposition with %d merges: r=%d", merges, current.r)
    return current


def bfs_layer_decomposition(g: Graph, root: int) -> TreeDecomposition:
    """
    Path decomposition from BFS layers: bag ``i`` is ``L_{i-1} ∪ L_i``.

    A graph with a single layer (one node) gets that layer as its only bag.
    """
    layers = bfs_layers(g, root, Permutation.identity(g.n))
    if len(layers) == 1:
        return _rooted([layers[0]], [])
    bags = [layers[i - 1] | layers[i] for i in range(1, len(layers))]
    return _rooted(bags, ((i, i + 1) for i in range(len(bags) - 1)))


def minimal_decomposition(g: Graph, tie_order: Permutation) -> TreeDecomposition:
    """Min-fill followed by the minimality merge."""
    return minimize_decomposition(min_fill_decomposition(g, tie_order))


def decomposition_profile(g: Graph, tie_order: Permutation) -> DecompositionProfile:
    """Supernode count, width, bag sizes and new nodes per bag of the minimal decomposition."""
    td = minimal_decomposition(g, tie_order)
    parent = td.tree.parent
    new_nodes = tuple(
        len(td.bags[i]) if parent[i] == NO_PARENT else len(td.bags[i] - td.bags[parent[i]])
        for i in range(td.r)
    )
    return DecompositionProfile(
        n=g.n,
        r=td.r,
        width=width(td),
        bag_sizes=tuple(len(b) for b in td.bags),
        new_nodes=new_nodes,
    )
