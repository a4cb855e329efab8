"""
Graph Statistics Service

Per-graph distributions and the maximum mean discrepancy between two sets
of them.

Binning (fixed so MMD values are comparable across runs):
    - degree: one bin per integer degree ``0..max``
    - clustering: 100 uniform bins on [0, 1]
    - orbit: the 11 node orbits of connected 4-node graphlets
    - spectral: normalized-Laplacian eigenvalues, 200 uniform bins on [0, 2]

Orbit census convention: every connected induced 4-node subgraph contributes
one count per node to that node's orbit; the histogram is the normalized
orbit count vector.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterator, Sequence
from enum import StrEnum
from typing import Final

import numpy as np

from treecodec.core.errors import GraphFormatError, TreeCodecError
from treecodec.models.graph import Graph
from treecodec.models.histogram import Histogram
from treecodec.services.graphs import require_connected

logger = logging.getLogger(__name__)

CLUSTERING_BINS: Final[int] = 100
SPECTRAL_BINS: Final[int] = 200

ORBIT_LABELS: Final[tuple[str, ...]] = (
    "path_end",
    "path_inner",
    "star_leaf",
    "star_center",
    "cycle",
    "paw_tail",
    "paw_triangle",
    "paw_hub",
    "diamond_side",
    "diamond_spine",
    "clique",
)
_ORBIT = {label: i for i, label in enumerate(ORBIT_LABELS)}


class StatisticKind(StrEnum):
    DEGREE = "degree"
    CLUSTERING = "clustering"
    ORBIT = "orbit"
    SPECTRAL = "spectral"


class Kernel(StrEnum):
    GAUSSIAN_EMD = "gaussian-emd"
    TV = "tv"


# ---------------------------------------------------------------------------
# Per-graph statistics
# ---------------------------------------------------------------------------


def degree_histogram(g: Graph) -> Histogram:
    degrees = np.array([g.degree(v) for v in range(g.n)], dtype=np.int64)
    counts = np.bincount(degrees, minlength=int(degrees.max()) + 1)
    return Histogram.from_counts(np.arange(len(counts) + 1, dtype=np.float64), counts)


def clustering_coefficients(g: Graph) -> np.ndarray:
    coeffs = np.zeros(g.n)
    for v in range(g.n):
        nbrs = g.adjacency[v]
        d = len(nbrs)
        if d < 2:
            continue
        links = sum(len(g.adjacency[u] & nbrs) for u in nbrs) / 2
        coeffs[v] = links / (d * (d - 1) / 2)
    return coeffs


def clustering_histogram(g: Graph) -> Histogram:
    counts, edges = np.histogram(clustering_coefficients(g), bins=CLUSTERING_BINS, range=(0.0, 1.0))
    return Histogram.from_counts(edges, counts)


def normalized_laplacian_spectrum(g: Graph) -> np.ndarray:
    """Eigenvalues of ``D^-1/2 (D - A) D^-1/2`` in ascending order."""
    adjacency = np.zeros((g.n, g.n))
    for u, v in g.edges:
        adjacency[u, v] = adjacency[v, u] = 1.0
    degrees = adjacency.sum(axis=1)
    with np.errstate(divide="ignore"):
        inv_sqrt = np.where(degrees > 0, 1.0 / np.sqrt(degrees), 0.0)
    laplacian = inv_sqrt[:, None] * (np.diag(degrees) - adjacency) * inv_sqrt[None, :]
    return np.linalg.eigvalsh(laplacian)


def spectral_histogram(g: Graph) -> Histogram:
    require_connected(g, "spectral statistic")
    eigenvalues = np.clip(normalized_laplacian_spectrum(g), 0.0, 2.0)
    counts, edges = np.histogram(eigenvalues, bins=SPECTRAL_BINS, range=(0.0, 2.0))
    return Histogram.from_counts(edges, counts)


def _classify_quad(g: Graph, quad: Sequence[int]) -> list[int]:
    """Orbit of each node of a 4-node subset, or [] if it induces a disconnected graph."""
    inside = set(quad)
    degree = [len(g.adjacency[v] & inside) for v in quad]
    m = sum(degree) // 2
    if m < 3 or 0 in degree:
        return []
    if m == 3:
        if max(degree) == 3:
            return [_ORBIT["star_center"] if d == 3 else _ORBIT["star_leaf"] for d in degree]
        return [_ORBIT["path_end"] if d == 1 else _ORBIT["path_inner"] for d in degree]
    if m == 4:
        if all(d == 2 for d in degree):
            return [_ORBIT["cycle"]] * 4
        paw = {1: "paw_tail", 2: "paw_triangle", 3: "paw_hub"}
        return [_ORBIT[paw[d]] for d in degree]
    if m == 5:
        return [_ORBIT["diamond_spine"] if d == 3 else _ORBIT["diamond_side"] for d in degree]
    return [_ORBIT["clique"]] * 4


def _connected_quads(g: Graph) -> Iterator[tuple[int, ...]]:
    """Each connected 4-node subset exactly once (ESU enumeration)."""
    adj = g.adjacency

    def extend(sub: list[int], extension: set[int], anchor: int) -> Iterator[tuple[int, ...]]:
        if len(sub) == 4:
            yield tuple(sub)
            return
        members = set(sub)
        closed = members.union(*(adj[x] for x in sub))
        pending = set(extension)
        while pending:
            w = min(pending)
            pending.remove(w)
            exclusive = {u for u in adj[w] if u > anchor and u not in closed}
            yield from extend(sub + [w], pending | exclusive, anchor)

    for v in range(g.n):
        yield from extend([v], {u for u in adj[v] if u > v}, v)


def orbit_counts(g: Graph, exhaustive: bool = False) -> np.ndarray:
    """
    Per-orbit node counts over connected induced 4-node subgraphs.

    ``exhaustive=True`` scans all 4-subsets instead of enumerating connected
    ones; both give identical counts.
    """
    quads = itertools.combinations(range(g.n), 4) if exhaustive else _connected_quads(g)
    counts = np.zeros(len(ORBIT_LABELS), dtype=np.int64)
    for quad in quads:
        for orbit in _classify_quad(g, quad):
            counts[orbit] += 1
    return counts


def orbit_histogram(g: Graph) -> Histogram:
    counts = orbit_counts(g)
    return Histogram.from_counts(np.arange(len(ORBIT_LABELS) + 1, dtype=np.float64), counts)


def graph_statistic(g: Graph, kind: StatisticKind) -> Histogram:
    """
    Raises:
        DisconnectedGraphError: for the spectral statistic of a disconnected graph.
    """
    if g.n < 1:
        raise GraphFormatError("statistics need at least one node")
    if kind is StatisticKind.DEGREE:
        return degree_histogram(g)
    if kind is StatisticKind.CLUSTERING:
        return clustering_histogram(g)
    if kind is StatisticKind.ORBIT:
        return orbit_histogram(g)
    return spectral_histogram(g)


# ---------------------------------------------------------------------------
# Distances and MMD
# ---------------------------------------------------------------------------


def _aligned(histograms: Sequence[Histogram]) -> tuple[np.ndarray, float]:
    """Stack histograms on their common grid, zero-padding shorter supports."""
    first = histograms[0]
    width = first.bin_width
    for h in histograms:
        if not np.isclose(h.edges[0], first.edges[0]) or not np.isclose(h.bin_width, width):
            raise TreeCodecError("histograms do not share a bin grid")
    bins = max(len(h.masses) for h in histograms)
    matrix = np.zeros((len(histograms), bins))
    for i, h in enumerate(histograms):
        matrix[i, : len(h.masses)] = h.masses
    return matrix, width


def emd(p: Histogram, q: Histogram) -> float:
    """1-D earth mover's distance: L1 distance of the CDFs times the bin width."""
    matrix, width = _aligned([p, q])
    return float(np.abs(np.cumsum(matrix[0] - matrix[1])).sum() * width)


def total_variation(p: Histogram, q: Histogram) -> float:
    matrix, _ = _aligned([p, q])
    return float(0.5 * np.abs(matrix[0] - matrix[1]).sum())


def _kernel_matrix(x: np.ndarray, y: np.ndarray, width: float, kernel: Kernel, sigma: float) -> np.ndarray:
    if kernel is Kernel.GAUSSIAN_EMD:
        cdf_x, cdf_y = np.cumsum(x, axis=1), np.cumsum(y, axis=1)
        distance = np.abs(cdf_x[:, None, :] - cdf_y[None, :, :]).sum(axis=2) * width
        return np.exp(-(distance**2) / (2.0 * sigma**2))
    tv = 0.5 * np.abs(x[:, None, :] - y[None, :, :]).sum(axis=2)
    return np.exp(-tv)


def mmd_squared(
    set_a: Sequence[Histogram],
    set_b: Sequence[Histogram],
    kernel: Kernel = Kernel.GAUSSIAN_EMD,
    sigma: float = 1.0,
) -> float:
    """Biased MMD² estimate ``mean k(a,a') + mean k(b,b') - 2 mean k(a,b)``."""
    if not set_a or not set_b:
        raise TreeCodecError("MMD needs two non-empty sets")
    if sigma <= 0:
        raise ValueError(f"sigma ({sigma}) must be positive")
    matrix, width = _aligned([*set_a, *set_b])
    x, y = matrix[: len(set_a)], matrix[len(set_a) :]
    k_xx = _kernel_matrix(x, x, width, kernel, sigma).mean()
    k_yy = _kernel_matrix(y, y, width, kernel, sigma).mean()
    k_xy = _kernel_matrix(x, y, width, kernel, sigma).mean()
    return float(k_xx + k_yy - 2.0 * k_xy)


def mmd(
    set_a: Sequence[Histogram],
    set_b: Sequence[Histogram],
    kernel: Kernel = Kernel.GAUSSIAN_EMD,
    sigma: float = 1.0,
) -> float:
    """MMD between two histogram sets, clamped at 0 before the square root."""
    return float(np.sqrt(max(mmd_squared(set_a, set_b, kernel, sigma), 0.0)))
