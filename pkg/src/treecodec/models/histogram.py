"""
Histogram Type

Normalized per-graph distribution of a statistic over fixed bins.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from treecodec.core.errors import TreeCodecError


@dataclass(frozen=True)
class Histogram:
    """
    Bin edges (``len(masses) + 1`` strictly increasing values) and bin masses
    summing to 1 (all-zero only for an empty support).
    """

    edges: tuple[float, ...]
    masses: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.edges) != len(self.masses) + 1:
            raise TreeCodecError(
                f"{len(self.edges)} edges for {len(self.masses)} bins"
            )
        if any(b <= a for a, b in zip(self.edges, self.edges[1:], strict=False)):
            raise TreeCodecError("histogram edges must be strictly increasing")
        if any(m < 0 for m in self.masses):
            raise TreeCodecError("histogram masses must be non-negative")

    @classmethod
    def from_counts(cls, edges: np.ndarray, counts: np.ndarray) -> Histogram:
        total = float(counts.sum())
        masses = counts / total if total > 0 else counts.astype(np.float64)
        return cls(edges=tuple(float(e) for e in edges), masses=tuple(float(m) for m in masses))

    @property
    def bin_width(self) -> float:
        return self.edges[1] - self.edges[0]
