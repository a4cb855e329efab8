"""
Seeded Random Streams

All randomness in the toolkit is drawn from ``numpy.random.Generator``
instances derived from one root seed and a tuple of names, so that each
experiment stage (permutations, training, sampling, ...) and each item within
it gets an independent, reproducible stream regardless of evaluation order.

Usage::

    rng = substream(seed, "perms", graph_index)
    order = rng.permutation(n)
"""

from __future__ import annotations

import zlib

import numpy as np


def _key(name: str | int) -> int:
    if isinstance(name, int):
        if name < 0:
            raise ValueError(f"substream index ({name}) must be non-negative")
        return name
    return zlib.crc32(name.encode("utf-8"))


def substream(seed: int, *names: str | int) -> np.random.Generator:
    """
    Derive an independent generator for ``names`` under root ``seed``.

    Strings are mapped through CRC32 (stable across processes, unlike
    ``hash``); integers are used directly as spawn-key entries.
    """
    if seed < 0:
        raise ValueError(f"seed ({seed}) must be non-negative")
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=tuple(_key(n) for n in names))
    return np.random.default_rng(sequence)
