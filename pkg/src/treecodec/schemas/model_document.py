"""
Persisted Model Document

JSON layout of a trained decision model: smoothing, tree-length cap and the
sparse count records. Loading validates every field.
"""

from typing import Any, Literal

from pydantic import BaseModel, Field

from treecodec.models.sequence import DecisionKind


class CountRecord(BaseModel):
    """One non-zero count: ``kind`` table, ``context`` row, ``outcome`` column."""

    kind: DecisionKind
    context: list[int] = Field(..., description="Bounded integer context features")
    outcome: int = Field(..., description="Outcome key (tree lengths: offset, -1 = end)")
    count: int = Field(..., ge=1)


class ModelDocument(BaseModel):
    """Top-level model file."""

    format: Literal["treecodec-model"] = "treecodec-model"
    version: int = Field(default=1, ge=1)
    alpha: float = Field(..., gt=0, description="Laplace smoothing")
    plr_cap: int = Field(..., ge=1, description="Largest generated path length")
    records: list[CountRecord] = Field(default_factory=list)
    run: dict[str, Any] | None = Field(default=None, description="Run configuration that produced the model")
