"""
Error Hierarchy

Every failure raised by the toolkit derives from ``TreeCodecError`` so the
CLI can map it to a data-error exit code. Input-format errors are also
``ValueError`` subclasses, matching what callers of a parser expect.
"""

from __future__ import annotations


class TreeCodecError(Exception):
    """Base class of all toolkit errors."""


class GraphFormatError(TreeCodecError, ValueError):
    """Malformed edge-list or dataset text, or an invalid graph construction."""


class DisconnectedGraphError(TreeCodecError, ValueError):
    """An operation that requires a connected graph received a disconnected one."""


class NotATreeError(TreeCodecError, ValueError):
    """A tree operation received a graph that is not a tree."""


class InvalidPlrError(TreeCodecError, ValueError):
    """A path-length sequence leaves the admissible bounds at ``index``."""

    def __init__(self, message: str, index: int | None = None) -> None:
        super().__init__(message)
        self.index = index


class DecompositionError(TreeCodecError, ValueError):
    """A tree decomposition that had to be valid is not."""


class SequenceFormatError(TreeCodecError, ValueError):
    """A decision sequence is structurally inconsistent or unparsable."""


class DatasetError(TreeCodecError):
    """Dataset generation, loading or splitting failed."""


class ModelFormatError(TreeCodecError):
    """A persisted decision model cannot be read back."""


class SamplingError(TreeCodecError):
    """The sampler could not produce an admissible graph within its attempt budget."""


class UsageError(TreeCodecError):
    """Inconsistent command-line arguments."""
