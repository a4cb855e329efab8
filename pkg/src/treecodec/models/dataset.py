"""
Dataset Type

A named, ordered collection of connected graphs with the seed that
generated it (``None`` for datasets ingested from files without one).
"""

from __future__ import annotations

from dataclasses import dataclass

from treecodec.core.errors import DisconnectedGraphError
from treecodec.models.graph import Graph


@dataclass(frozen=True)
class Dataset:
    graphs: tuple[Graph, ...]
    name: str = "dataset"
    seed: int | None = None

    def __post_init__(self) -> None:
        if any(ch.isspace() for ch in self.name) or not self.name:
            raise ValueError(f"dataset name '{self.name}' must be a non-empty token")
        for i, g in enumerate(self.graphs):
            if not g.is_connected:
                raise DisconnectedGraphError(f"{self.name}: graph {i} is disconnected")

    def __len__(self) -> int:
        return len(self.graphs)

    @property
    def node_counts(self) -> list[int]:
        return [g.n for g in self.graphs]
