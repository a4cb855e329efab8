"""
Graph Service

Edge-list I/O, traversals and distance utilities over :class:`Graph`, the
small-instance isomorphism oracle, and the random graph/tree builders used by
tests and experiments (uniform permutations, Prüfer trees, connected G(n,p)).

Every traversal whose output depends on neighbor order takes an explicit
:class:`Permutation`; nothing here depends on hash order.
"""

from __future__ import annotations

import heapq
import itertools
import logging
from collections import deque
from collections.abc import Iterator, Sequence
from typing import Final

import numpy as np

from treecodec.core.errors import DisconnectedGraphError, GraphFormatError
from treecodec.models.graph import Graph, Permutation

logger = logging.getLogger(__name__)

MAX_CONNECT_RESAMPLES: Final[int] = 1000


# ---------------------------------------------------------------------------
# Edge-list text format
# ---------------------------------------------------------------------------


def _parse_int(token: str, line_no: int) -> int:
    try:
        value = int(token)
    except ValueError as exc:
        raise GraphFormatError(f"line {line_no}: '{token}' is not an integer") from exc
    if value < 0:
        raise GraphFormatError(f"line {line_no}: node id ({value}) must be non-negative")
    return value


def parse_edge_list(text: str) -> Graph:
    """
    Parse ``u v`` lines into a Graph.

    An optional first line ``n <count>`` fixes the node count (otherwise it is
    ``1 + max id``). Blank lines and ``#`` comments are ignored, and repeated
    edges collapse to one.

    Raises:
        GraphFormatError: on self-loops, non-integer tokens, or endpoints
            outside a declared node count.
    """
    declared_n: int | None = None
    max_id = -1
    pairs: list[tuple[int, int]] = []
    seen_content = False

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if tokens[0] == "n":
            if seen_content or len(tokens) != 2:
                raise GraphFormatError(f"line {line_no}: misplaced node-count line '{line}'")
            declared_n = _parse_int(tokens[1], line_no)
            seen_content = True
            continue
        seen_content = True
        if len(tokens) != 2:
            raise GraphFormatError(f"line {line_no}: expected 'u v', got '{line}'")
        u, v = (_parse_int(t, line_no) for t in tokens)
        if u == v:
            raise GraphFormatError(f"line {line_no}: self-loop on node {u}")
        if declared_n is not None and max(u, v) >= declared_n:
            raise GraphFormatError(
                f"line {line_no}: endpoint {max(u, v)} exceeds declared n={declared_n}"
            )
        max_id = max(max_id, u, v)
        pairs.append((u, v))

    n = declared_n if declared_n is not None else max_id + 1
    return Graph.from_edges(n, pairs)


def serialize_edge_list(g: Graph) -> str:
    """Inverse of :func:`parse_edge_list`: ``n <count>`` then sorted ``u v`` lines."""
    lines = [f"n {g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.sorted_edges())
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Traversals and distances
# ---------------------------------------------------------------------------


def _distances(g: Graph, source: int) -> list[int]:
    dist = [-1] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in g.adjacency[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def is_connected(g: Graph) -> bool:
    return g.is_connected


def require_connected(g: Graph, what: str = "operation") -> None:
    if not is_connected(g):
        raise DisconnectedGraphError(f"{what} requires a connected graph (n={g.n}, m={g.m})")


def bfs_order(g: Graph, root: int, tie_order: Permutation) -> list[int]:
    """BFS visitation order from ``root``; neighbors are queued by ``tie_order`` rank."""
    rank = tie_order.rank
    seen = [False] * g.n
    seen[root] = True
    order = [root]
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in sorted(g.adjacency[u], key=rank.__getitem__):
            if not seen[w]:
                seen[w] = True
                order.append(w)
                queue.append(w)
    return order


def dfs_order(g: Graph, root: int, tie_order: Permutation) -> list[int]:
    """Iterative preorder DFS from ``root``; lower-ranked neighbors are explored first."""
    rank = tie_order.rank
    seen = [False] * g.n
    order: list[int] = []
    stack = [root]
    while stack:
        u = stack.pop()
        if seen[u]:
            continue
        seen[u] = True
        order.append(u)
        stack.extend(
            w for w in sorted(g.adjacency[u], key=rank.__getitem__, reverse=True) if not seen[w]
        )
    return order


def bfs_layers(g: Graph, root: int, tie_order: Permutation) -> list[frozenset[int]]:
    """
    Split the nodes into BFS layers ``L_0 = {root}, L_1, ...`` by distance.

    Raises:
        DisconnectedGraphError: if some node is unreachable from ``root``.
    """
    if not 0 <= root < g.n:
        raise GraphFormatError(f"root ({root}) is not a node of a graph with n={g.n}")
    require_connected(g, "bfs_layers")
    order = bfs_order(g, root, tie_order)
    dist = _distances(g, root)
    layers: list[set[int]] = [set() for _ in range(max(dist) + 1)]
    for v in order:
        layers[dist[v]].add(v)
    return [frozenset(layer) for layer in layers]


def eccentricities(g: Graph) -> list[int]:
    require_connected(g, "eccentricities")
    return [max(_distances(g, v)) for v in range(g.n)]


def diameter(g: Graph) -> int:
    """Largest shortest-path distance, by all-pairs BFS."""
    if g.n == 0:
        raise GraphFormatError("diameter of the empty graph is undefined")
    return max(eccentricities(g))


# ---------------------------------------------------------------------------
# Isomorphism oracle
# ---------------------------------------------------------------------------


def _signature(g: Graph, v: int) -> tuple[int, tuple[int, ...]]:
    return g.degree(v), tuple(sorted(g.degree(w) for w in g.adjacency[v]))


def _matching_order(g: Graph) -> list[int]:
    """Greedy order: each next node has the most already-ordered neighbors."""
    remaining = set(range(g.n))
    placed: set[int] = set()
    order: list[int] = []
    while remaining:
        v = max(
            remaining,
            key=lambda u: (len(g.adjacency[u] & placed), g.degree(u), -u),
        )
        order.append(v)
        placed.add(v)
        remaining.discard(v)
    return order


def graph_isomorphic(g1: Graph, g2: Graph) -> bool:
    """
    Exact isomorphism test by backtracking.

    Candidates are pruned by (degree, sorted neighbor degrees) signatures and
    by adjacency consistency with the partial mapping. Intended for n ≤ 10;
    larger inputs work but may be slow on highly regular graphs.
    """
    if g1.n != g2.n or g1.m != g2.m:
        return False
    sig1 = [_signature(g1, v) for v in range(g1.n)]
    sig2 = [_signature(g2, v) for v in range(g2.n)]
    if sorted(sig1) != sorted(sig2):
        return False

    order = _matching_order(g1)
    mapping: dict[int, int] = {}
    used = [False] * g2.n

    def consistent(u: int, w: int) -> bool:
        for x, y in mapping.items():
            if g1.has_edge(u, x) != g2.has_edge(w, y):
                return False
        return True

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        u = order[i]
        for w in range(g2.n):
            if used[w] or sig2[w] != sig1[u] or not consistent(u, w):
                continue
            mapping[u] = w
            used[w] = True
            if extend(i + 1):
                return True
            del mapping[u]
            used[w] = False
        return False

    return extend(0)


# ---------------------------------------------------------------------------
# Relabeling and random builders
# ---------------------------------------------------------------------------


def relabel(g: Graph, perm: Permutation) -> Graph:
    """Reorder nodes: node ``perm.order[i]`` becomes node ``i``."""
    if len(perm) != g.n:
        raise GraphFormatError(f"permutation of size {len(perm)} for graph with n={g.n}")
    rank = perm.rank
    return Graph.from_edges(g.n, ((rank[u], rank[v]) for u, v in g.edges))


def random_permutation(n: int, rng: np.random.Generator) -> Permutation:
    """Uniform random node ordering."""
    return Permutation.of(rng.permutation(n).tolist())


def is_tree(g: Graph) -> bool:
    return g.n >= 1 and g.m == g.n - 1 and is_connected(g)


def prufer_to_tree(sequence: Sequence[int], n: int) -> Graph:
    """Decode a Prüfer sequence of length ``n - 2`` into a labeled tree on ``n`` nodes."""
    if n < 1:
        raise GraphFormatError(f"tree size ({n}) must be positive")
    if n == 1:
        return Graph(n=1)
    if len(sequence) != n - 2 or any(not 0 <= s < n for s in sequence):
        raise GraphFormatError(f"invalid Prüfer sequence {list(sequence)} for n={n}")
    degree = [1] * n
    for s in sequence:
        degree[s] += 1
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    edges: list[tuple[int, int]] = []
    for s in sequence:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, s))
        degree[s] -= 1
        if degree[s] == 1:
            heapq.heappush(leaves, s)
    edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return Graph.from_edges(n, edges)


def random_tree(n: int, rng: np.random.Generator) -> Graph:
    """Uniform random labeled tree on ``n`` nodes (random Prüfer sequence)."""
    if n <= 2:
        return prufer_to_tree([], n)
    return prufer_to_tree(rng.integers(0, n, size=n - 2).tolist(), n)


def enumerate_labeled_trees(n: int) -> Iterator[Graph]:
    """All ``n^(n-2)`` labeled trees on ``n`` nodes."""
    if n <= 2:
        yield prufer_to_tree([], n)
        return
    for sequence in itertools.product(range(n), repeat=n - 2):
        yield prufer_to_tree(sequence, n)


def random_connected_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    """
    G(n, p) conditioned on connectivity, by whole-graph resampling.

    Raises:
        DisconnectedGraphError: if no connected draw appears within
            ``MAX_CONNECT_RESAMPLES`` attempts.
    """
    pairs = list(itertools.combinations(range(n), 2))
    for _ in range(MAX_CONNECT_RESAMPLES):
        mask = rng.random(len(pairs)) < p
        g = Graph.from_edges(n, (pair for pair, keep in zip(pairs, mask, strict=True) if keep))
        if is_connected(g):
            return g
    raise DisconnectedGraphError(
        f"no connected G({n}, {p}) draw in {MAX_CONNECT_RESAMPLES} attempts"
    )
