"""
Run Configuration Schema

The resolved parameters of one CLI invocation. It is written next to every
CSV output (``<name>.run.json``) and embedded under ``"run"`` in every JSON
output, so an artifact always carries the values that produced it.
"""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, Field

from treecodec import __version__


class RunConfig(BaseModel):
    """Provenance record of a single subcommand run."""

    command: str = Field(..., min_length=1, description="Subcommand name")
    seed: int = Field(..., ge=0, description="Root seed of every random substream")
    plr_cap: int | None = Field(default=None, ge=1, description="Largest generated path length")
    max_nodes: int | None = Field(default=None, ge=1, description="Sampling node budget")
    alpha: float | None = Field(default=None, gt=0, description="Laplace smoothing")
    n_perms: int | None = Field(default=None, ge=1, description="Permutations per graph")
    sigma: float | None = Field(default=None, gt=0, description="Gaussian-EMD kernel bandwidth")
    paths: dict[str, str] = Field(default_factory=dict, description="Input and output files")
    options: dict[str, Any] = Field(default_factory=dict, description="Remaining flags")
    version: str = Field(default=__version__, description="treecodec version")
