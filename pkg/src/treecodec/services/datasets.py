"""
Dataset Service

Synthetic generators (two-community graphs, lobster trees), the multi-graph
text format, and seeded 70/10/20 splitting.

File format::

    # dataset name=community-small seed=7
    # graph 0 14
    0 1
    0 5
    ...

    # graph 1 17
    ...

The ``# dataset`` line is optional. Each graph block starts with
``# graph <index> <n>``; indices must count up from 0.

Every generated graph draws from its own substream
``substream(seed, "dataset", <name>, <index>)``, so a dataset is reproducible
from its seed and any prefix of it is independent of ``count``.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Final

import numpy as np

from treecodec.core.errors import DatasetError, GraphFormatError
from treecodec.core.random import substream
from treecodec.models.dataset import Dataset
from treecodec.models.graph import Graph
from treecodec.services.graphs import is_connected, parse_edge_list

logger = logging.getLogger(__name__)

MAX_COMMUNITY_RESAMPLES: Final[int] = 1000
TRAIN_FRACTION: Final[float] = 0.7
VALIDATION_FRACTION: Final[float] = 0.1
MIN_SPLIT_SIZE: Final[int] = 10


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------


def _community_graph(n: int, p_in: float, inter_frac: float, rng: np.random.Generator) -> Graph:
    left = (n + 1) // 2
    intra = list(itertools.combinations(range(left), 2))
    intra += list(itertools.combinations(range(left, n), 2))
    cross = [(u, v) for u in range(left) for v in range(left, n)]
    n_cross = min(math.ceil(inter_frac * n), len(cross))

    for _ in range(MAX_COMMUNITY_RESAMPLES):
        keep = rng.random(len(intra)) < p_in
        picks = rng.choice(len(cross), size=n_cross, replace=False)
        edges = [pair for pair, k in zip(intra, keep, strict=True) if k]
        edges += [cross[i] for i in picks]
        g = Graph.from_edges(n, edges)
        if is_connected(g):
            return g
    raise DatasetError(
        f"no connected community graph (n={n}, p_in={p_in}, inter_frac={inter_frac}) "
        f"in {MAX_COMMUNITY_RESAMPLES} attempts"
    )


def gen_community(
    count: int,
    min_n: int,
    max_n: int,
    p_in: float,
    inter_frac: float,
    seed: int,
    name: str = "community",
) -> Dataset:
    """
    Two-community graphs, resampled as a whole until connected.

    Each graph has ``|V|`` uniform in ``[min_n, max_n]``, communities of sizes
    ``ceil(|V|/2)`` and ``floor(|V|/2)``, intra edges i.i.d. with ``p_in``, and
    ``ceil(inter_frac * |V|)`` distinct cross edges drawn without replacement.

    Raises:
        DatasetError: if a graph stays disconnected after
            ``MAX_COMMUNITY_RESAMPLES`` draws.
    """
    if count < 1:
        raise ValueError(f"count ({count}) must be positive")
    if min_n < 4 or max_n < min_n:
        raise ValueError(f"node range [{min_n}, {max_n}] must satisfy 4 <= min_n <= max_n")
    if not 0 < p_in <= 1:
        raise ValueError(f"p_in ({p_in}) must be in (0, 1]")
    if inter_frac <= 0:
        raise ValueError(f"inter_frac ({inter_frac}) must be positive")

    logger.info(
        "Generating %d %s graphs (n in [%d, %d], p_in=%.3f, inter_frac=%.3f, seed=%d)",
        count, name, min_n, max_n, p_in, inter_frac, seed,
    )
    graphs = []
    for i in range(count):
        rng = substream(seed, "dataset", name, i)
        n = int(rng.integers(min_n, max_n + 1))
        graphs.append(_community_graph(n, p_in, inter_frac, rng))
    return Dataset(graphs=tuple(graphs), name=name, seed=seed)


def _lobster(expected_backbone: float, p1: float, p2: float, max_n: int, rng: np.random.Generator) -> Graph:
    n = min(int(rng.geometric(1.0 / expected_backbone)), max_n)
    edges = [(v, v + 1) for v in range(n - 1)]
    level_one: list[int] = []
    for v in range(n):
        while n < max_n and rng.random() < p1:
            edges.append((v, n))
            level_one.append(n)
            n += 1
    for u in level_one:
        while n < max_n and rng.random() < p2:
            edges.append((u, n))
            n += 1
    return Graph.from_edges(n, edges)


def gen_lobster(
    count: int = 100,
    expected_backbone: float = 40,
    p1: float = 0.7,
    p2: float = 0.7,
    max_n: int = 100,
    seed: int = 0,
    name: str = "lobster",
) -> Dataset:
    """
    Random lobster trees.

    A backbone path of geometric length (mean ``expected_backbone``) grows
    level-1 leaves on each backbone node while coin flips with ``p1``
    succeed, then level-2 leaves on each level-1 node with ``p2``. Growth
    stops at ``max_n`` nodes.
    """
    if count < 1:
        raise ValueError(f"count ({count}) must be positive")
    if expected_backbone < 2:
        raise ValueError(f"expected_backbone ({expected_backbone}) must be at least 2")
    for label, p in (("p1", p1), ("p2", p2)):
        if not 0 <= p < 1:
            raise ValueError(f"{label} ({p}) must be in [0, 1)")
    if max_n < 1:
        raise ValueError(f"max_n ({max_n}) must be positive")

    logger.info(
        "Generating %d lobsters (backbone mean %.1f, p1=%.2f, p2=%.2f, max_n=%d, seed=%d)",
        count, expected_backbone, p1, p2, max_n, seed,
    )
    graphs = tuple(
        _lobster(expected_backbone, p1, p2, max_n, substream(seed, "dataset", name, i))
        for i in range(count)
    )
    return Dataset(graphs=graphs, name=name, seed=seed)


@dataclass(frozen=True)
class CommunityPreset:
    count: int
    min_n: int
    max_n: int
    p_in: float = 0.7
    inter_frac: float = 0.05


@dataclass(frozen=True)
class LobsterPreset:
    count: int = 100
    expected_backbone: float = 40
    p1: float = 0.7
    p2: float = 0.7
    max_n: int = 100


PRESETS: Final[dict[str, CommunityPreset | LobsterPreset]] = {
    "community": CommunityPreset(count=500, min_n=60, max_n=160),
    "community-small": CommunityPreset(count=500, min_n=12, max_n=20),
    "lobster": LobsterPreset(),
}


def generate_preset(name: str, seed: int, **overrides: Any) -> Dataset:
    """
    Generate one of ``PRESETS``; keyword ``overrides`` replace preset fields.

    Usage::

        generate_preset("community-small", seed=7, count=100, p_in=0.5)
    """
    preset = PRESETS.get(name)
    if preset is None:
        raise ValueError(f"unknown dataset preset '{name}' (choose from {', '.join(PRESETS)})")
    unknown = set(overrides) - {f.name for f in fields(preset)}
    if unknown:
        raise ValueError(f"preset '{name}' has no parameter(s) {', '.join(sorted(unknown))}")
    preset = replace(preset, **overrides)
    if isinstance(preset, LobsterPreset):
        return gen_lobster(**asdict(preset), seed=seed, name=name)
    return gen_community(**asdict(preset), seed=seed, name=name)


# ---------------------------------------------------------------------------
# File I/O
# ---------------------------------------------------------------------------


def dataset_to_text(ds: Dataset) -> str:
    header = f"# dataset name={ds.name}"
    if ds.seed is not None:
        header += f" seed={ds.seed}"
    blocks = [header]
    for i, g in enumerate(ds.graphs):
        lines = [f"# graph {i} {g.n}"]
        lines.extend(f"{u} {v}" for u, v in g.sorted_edges())
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def _parse_header(line: str, line_no: int) -> tuple[str, int | None]:
    fields = dict(token.partition("=")[::2] for token in line.split()[2:])
    seed = fields.get("seed")
    try:
        return fields.get("name") or "dataset", int(seed) if seed is not None else None
    except ValueError as exc:
        raise GraphFormatError(f"line {line_no}: bad dataset seed '{seed}'") from exc


def dataset_from_text(text: str, default_name: str = "dataset") -> Dataset:
    """
    Raises:
        GraphFormatError: on malformed headers or edge lines.
        DisconnectedGraphError: if any graph is disconnected.
        DatasetError: if the text holds no graph.
    """
    name, seed = default_name, None
    blocks: list[list[str]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("# dataset"):
            if blocks:
                raise GraphFormatError(f"line {line_no}: dataset header after the first graph")
            name, seed = _parse_header(line, line_no)
        elif line.startswith("# graph"):
            tokens = line.split()
            if len(tokens) != 4 or tokens[2] != str(len(blocks)) or not tokens[3].isdigit():
                raise GraphFormatError(f"line {line_no}: malformed graph header '{line}'")
            blocks.append([f"n {tokens[3]}"])
        elif line.startswith("#"):
            continue
        elif not blocks:
            raise GraphFormatError(f"line {line_no}: edge line before the first graph header")
        else:
            blocks[-1].append(line)

    if not blocks:
        raise DatasetError("dataset holds no graphs")
    graphs = tuple(parse_edge_list("\n".join(block)) for block in blocks)
    return Dataset(graphs=graphs, name=name, seed=seed)


def save_dataset(ds: Dataset, path: Path) -> None:
    path.write_text(dataset_to_text(ds), encoding="utf-8")
    logger.info("Saved %d graphs to %s", len(ds), path)


def load_dataset(path: Path) -> Dataset:
    default_name = "_".join(path.stem.split()) or "dataset"
    ds = dataset_from_text(path.read_text(encoding="utf-8"), default_name=default_name)
    logger.info("Loaded %d graphs from %s (%s)", len(ds), path, ds.name)
    return ds


# ---------------------------------------------------------------------------
# Splitting
# ---------------------------------------------------------------------------


def split_dataset(ds: Dataset, seed: int) -> tuple[Dataset, Dataset, Dataset]:
    """
    Seeded shuffle, then floor(70%) train, floor(10%) validation, rest test.

    Raises:
        DatasetError: if the dataset has fewer than ``MIN_SPLIT_SIZE`` graphs.
    """
    total = len(ds)
    if total < MIN_SPLIT_SIZE:
        raise DatasetError(f"cannot split {total} graphs; need at least {MIN_SPLIT_SIZE}")
    order = substream(seed, "split").permutation(total).tolist()
    n_train = math.floor(total * TRAIN_FRACTION + 1e-9)
    n_val = math.floor(total * VALIDATION_FRACTION + 1e-9)
    parts = (order[:n_train], order[n_train : n_train + n_val], order[n_train + n_val :])
    train, validation, test = (
        Dataset(graphs=tuple(ds.graphs[i] for i in part), name=f"{ds.name}-{suffix}", seed=ds.seed)
        for part, suffix in zip(parts, ("train", "validation", "test"), strict=True)
    )
    logger.info("Split %s: %d / %d / %d", ds.name, len(train), len(validation), len(test))
    return train, validation, test
