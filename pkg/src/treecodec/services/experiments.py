"""
Experiment Orchestrator

Composes the codec, model, sampling and statistics services into the
workflows behind the CLI subcommands, and owns artifact writing.

Every workflow takes its root seed explicitly and draws per-item streams
through :func:`substream`, so results do not depend on evaluation order.
Stream names:

    - ``("perms", <method>, i)``  hypothesis-space orderings of graph ``i``
    - ``("perms", i)``            decomposition-statistics ordering of graph ``i``
    - ``("nll", i)``              NLL orderings of graph ``i`` (shared by all
      models, so comparisons are paired)
    - ``("sample", i, attempt)``  sampled graph ``i``
    - ``("sample-tree", i)``      sampled tree ``i``
"""

from __future__ import annotations

import json
import logging
from collections.abc import Iterable, Sequence
from pathlib import Path
from types import TracebackType
from typing import Any

import numpy as np
import pandas as pd
from pydantic import BaseModel

from treecodec.core.random import substream
from treecodec.models.dataset import Dataset
from treecodec.schemas.reports import (
    LobsterRow,
    MmdReport,
    MmdRow,
    NllRow,
    NllSummaryRow,
    SpaceRow,
    TdStatsRow,
)
from treecodec.schemas.run import RunConfig
from treecodec.services.codec import SequenceMethod, unique_sequence_count
from treecodec.services.decision_model import DecisionModel
from treecodec.services.decomposition import decomposition_profile
from treecodec.services.graphs import random_permutation
from treecodec.services.likelihood import nll, tree_nll
from treecodec.services.lobster import lobster_accuracy
from treecodec.services.sampling import sample_graph, sample_tree
from treecodec.services.statistics import (
    CLUSTERING_BINS,
    ORBIT_LABELS,
    SPECTRAL_BINS,
    Kernel,
    StatisticKind,
    graph_statistic,
    mmd,
)

logger = logging.getLogger(__name__)

BINNING: dict[str, str] = {
    StatisticKind.DEGREE: "integer degrees 0..max, unit bins",
    StatisticKind.CLUSTERING: f"{CLUSTERING_BINS} uniform bins on [0, 1]",
    StatisticKind.ORBIT: f"{len(ORBIT_LABELS)} orbit bins: {', '.join(ORBIT_LABELS)}",
    StatisticKind.SPECTRAL: f"normalized Laplacian eigenvalues, {SPECTRAL_BINS} uniform bins on [0, 2]",
}


# ---------------------------------------------------------------------------
# Artifacts
# ---------------------------------------------------------------------------


class ArtifactWriter:
    """
    Writes run outputs and removes every one of them if the run fails.

    CSV files get a ``<name>.run.json`` sidecar with the run configuration;
    JSON documents embed it under ``"run"``.

    Usage::

        with ArtifactWriter(run) as writer:
            writer.write_csv(Path("space.csv"), rows, SpaceRow)
    """

    def __init__(self, run: RunConfig) -> None:
        self.run = run
        self.written: list[Path] = []

    def __enter__(self) -> ArtifactWriter:
        return self

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc: BaseException | None,
        tb: TracebackType | None,
    ) -> None:
        if exc_type is not None:
            self.discard()

    def discard(self) -> None:
        for path in self.written:
            path.unlink(missing_ok=True)
            logger.info("Removed partial output '%s'", path)
        self.written.clear()

    @staticmethod
    def sidecar(path: Path) -> Path:
        return path.with_name(path.stem + ".run.json")

    def track(self, path: Path) -> Path:
        """Register ``path`` as an output of this run and create its directory."""
        path.parent.mkdir(parents=True, exist_ok=True)
        self.written.append(path)
        return path

    def write_text(self, path: Path, text: str) -> None:
        self.track(path).write_text(text, encoding="utf-8")

    def write_csv(self, path: Path, rows: Sequence[BaseModel], schema: type[BaseModel]) -> None:
        frame = pd.DataFrame(
            [row.model_dump() for row in rows], columns=list(schema.model_fields)
        )
        frame.to_csv(self.track(path), index=False)
        self.write_text(self.sidecar(path), self.run.model_dump_json(indent=2) + "\n")
        logger.info("Wrote %d rows to '%s'", len(rows), path)

    def write_json(self, path: Path, document: dict[str, Any]) -> None:
        payload = {**document, "run": self.run.model_dump(mode="json")}
        self.write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# Workflows
# ---------------------------------------------------------------------------


class ExperimentPipeline:
    """
    The experiment workflows, bound to one root seed.

    **Hypothesis space** (``space``): graph → distinct sequences per method.
    **Decomposition shape** (``td_stats``): graph → minimal decomposition profile.
    **Likelihood** (``nll_rows`` / ``summarize_nll``): model × graphs → NLL rows.
    **Generation** (``sample_graphs`` / ``sample_trees``): model → Dataset.
    **Statistics** (``mmd_row`` / ``mmd_report``): two graph sets → MMD per statistic.
    **Lobsters** (``lobster_row``): graph set → lobster accuracy.
    """

    def __init__(self, seed: int) -> None:
        self.seed = seed

    # ------------------------------------------------------------------
    # Hypothesis space and decomposition shape
    # ------------------------------------------------------------------

    def space(
        self, ds: Dataset, n_perms: int, methods: Iterable[SequenceMethod]
    ) -> list[SpaceRow]:
        methods = list(methods)
        rows = []
        for i, g in enumerate(ds.graphs):
            counts = {
                method.value: unique_sequence_count(
                    g, n_perms, method, substream(self.seed, "perms", method.value, i)
                )
                for method in methods
            }
            rows.append(SpaceRow(graph=i, n=g.n, m=g.m, perms=n_perms, **counts))
            logger.debug("space graph %d: %s", i, counts)
        return rows

    def td_stats(self, ds: Dataset) -> list[TdStatsRow]:
        rows = []
        for i, g in enumerate(ds.graphs):
            perm = random_permutation(g.n, substream(self.seed, "perms", i))
            profile = decomposition_profile(g, perm)
            rows.append(
                TdStatsRow(
                    graph=i,
                    n=g.n,
                    m=g.m,
                    r=profile.r,
                    width=profile.width,
                    mean_bag_size=float(np.mean(profile.bag_sizes)),
                    mean_new_nodes=float(np.mean(profile.new_nodes)),
                    slack=profile.slack,
                )
            )
        return rows

    # ------------------------------------------------------------------
    # Likelihood
    # ------------------------------------------------------------------

    def nll_rows(
        self,
        model: DecisionModel,
        ds: Dataset,
        split: str,
        n_perms: int,
        trees: bool = False,
    ) -> list[NllRow]:
        """Per-graph NLL; with ``trees`` only the tree-length stage is scored."""
        rows = []
        for i, g in enumerate(ds.graphs):
            if trees:
                value = tree_nll(model, g)
                rows.append(
                    NllRow(
                        split=split, graph=i, n=g.n, expected_nll=value,
                        marginal_nll=value, std_error=0.0, distinct=1,
                    )
                )
                continue
            result = nll(model, g, n_perms, substream(self.seed, "nll", i))
            rows.append(
                NllRow(
                    split=split,
                    graph=i,
                    n=g.n,
                    expected_nll=result.expected,
                    marginal_nll=result.marginal,
                    std_error=result.std_error,
                    distinct=result.distinct,
                )
            )
        return rows

    @staticmethod
    def summarize_nll(rows: Sequence[NllRow], split: str, model_label: str) -> NllSummaryRow:
        if not rows:
            raise ValueError(f"split '{split}' has no graphs to summarize")
        return NllSummaryRow(
            split=split,
            model=model_label,
            graphs=len(rows),
            expected_nll=float(np.mean([r.expected_nll for r in rows])),
            marginal_nll=float(np.mean([r.marginal_nll for r in rows])),
        )

    # ------------------------------------------------------------------
    # Generation
    # ------------------------------------------------------------------

    def sample_graphs(
        self, model: DecisionModel, count: int, max_nodes: int, plr_cap: int | None = None
    ) -> Dataset:
        cap = plr_cap or model.plr_cap
        graphs = tuple(sample_graph(model, cap, max_nodes, self.seed, index=i) for i in range(count))
        logger.info("Sampled %d graphs (plr_cap=%d, max_nodes=%d)", count, cap, max_nodes)
        return Dataset(graphs=graphs, name="samples", seed=self.seed)

    def sample_trees(
        self, model: DecisionModel, count: int, max_nodes: int, plr_cap: int | None = None
    ) -> Dataset:
        cap = plr_cap or model.plr_cap
        graphs = tuple(sample_tree(model, cap, max_nodes, self.seed, index=i) for i in range(count))
        logger.info("Sampled %d trees (plr_cap=%d, max_nodes=%d)", count, cap, max_nodes)
        return Dataset(graphs=graphs, name="tree-samples", seed=self.seed)

    # ------------------------------------------------------------------
    # Statistics
    # ------------------------------------------------------------------

    @staticmethod
    def mmd_row(label: str, reference: Dataset, candidate: Dataset, kernel: Kernel, sigma: float) -> MmdRow:
        values: dict[str, float] = {}
        for kind in StatisticKind:
            ref = [graph_statistic(g, kind) for g in reference.graphs]
            cand = [graph_statistic(g, kind) for g in candidate.graphs]
            values[kind.value] = mmd(ref, cand, kernel, sigma)
        logger.info("MMD %s (%s, sigma=%.3f): %s", label, kernel, sigma, values)
        return MmdRow(label=label, **values)

    @staticmethod
    def mmd_report(rows: Sequence[MmdRow], kernel: Kernel, sigma: float) -> MmdReport:
        return MmdReport(
            kernel=kernel.value,
            sigma=sigma,
            binning={str(k): v for k, v in BINNING.items()},
            rows=list(rows),
        )

    @staticmethod
    def lobster_row(label: str, ds: Dataset) -> LobsterRow:
        return LobsterRow(label=label, graphs=len(ds), accuracy=lobster_accuracy(ds.graphs))
