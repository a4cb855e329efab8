"""
Report Schemas

Row models of the CSV outputs written by the CLI. Field order is the column
order; headers are the field names and do not change between runs.
"""

from __future__ import annotations

from pydantic import BaseModel, Field


class SpaceRow(BaseModel):
    """``space``: distinct sequences per method for one graph."""

    graph: int = Field(..., ge=0, description="Graph index in the dataset")
    n: int
    m: int
    perms: int = Field(..., ge=1)
    td: int | None = Field(default=None, description="Distinct decision sequences")
    bfs: int | None = Field(default=None, description="Distinct BFS adjacency sequences")
    dfs: int | None = Field(default=None, description="Distinct DFS adjacency sequences")


class TdStatsRow(BaseModel):
    """``td-stats``: shape of one minimal decomposition."""

    graph: int = Field(..., ge=0)
    n: int
    m: int
    r: int = Field(..., description="Supernodes")
    width: int = Field(..., description="Largest bag size")
    mean_bag_size: float
    mean_new_nodes: float
    slack: int = Field(..., description="n - width + 1 - r, never negative")


class NllRow(BaseModel):
    """``eval-nll --per-graph``: likelihood of one graph."""

    split: str
    graph: int = Field(..., ge=0)
    n: int
    expected_nll: float
    marginal_nll: float
    std_error: float
    distinct: int


class NllSummaryRow(BaseModel):
    """``eval-nll``: one row per evaluated split."""

    split: str
    model: str
    graphs: int
    expected_nll: float = Field(..., description="Mean over graphs of the expected NLL")
    marginal_nll: float = Field(..., description="Mean over graphs of the marginal NLL")


class MmdRow(BaseModel):
    """``eval-stats``: MMD per statistic between a reference set and a candidate set."""

    label: str
    degree: float
    clustering: float
    orbit: float
    spectral: float


class LobsterRow(BaseModel):
    """``lobster-acc``: share of lobsters in a graph set."""

    label: str
    graphs: int
    accuracy: float = Field(..., ge=0.0, le=1.0)


class MmdReport(BaseModel):
    """JSON form of ``eval-stats`` with the binning that produced it."""

    kernel: str
    sigma: float
    binning: dict[str, str]
    rows: list[MmdRow]
