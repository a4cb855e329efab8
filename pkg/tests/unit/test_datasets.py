"""
Dataset Service Unit Tests

Verifies the community and lobster generators, presets, the multi-graph
text format and seeded 70/10/20 splitting.

No external services required; runs entirely offline.
"""

from __future__ import annotations

from pathlib import Path

import pytest

from tests.helpers import path_graph
from treecodec.core.errors import DatasetError, DisconnectedGraphError, GraphFormatError
from treecodec.core.random import substream
from treecodec.models.dataset import Dataset
from treecodec.models.graph import Graph
from treecodec.services.datasets import (
    PRESETS,
    dataset_from_text,
    dataset_to_text,
    gen_community,
    gen_lobster,
    generate_preset,
    load_dataset,
    save_dataset,
    split_dataset,
)
from treecodec.services.graphs import is_connected, is_tree

# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _paths(count: int) -> Dataset:
    return Dataset(graphs=tuple(path_graph(2 + i % 5) for i in range(count)), name="paths")


# ---------------------------------------------------------------------------
# Random streams
# ---------------------------------------------------------------------------


class TestSubstream:
    """substream."""

    def test_same_names_same_stream(self):
        assert substream(4, "perms", 2).random() == substream(4, "perms", 2).random()

    def test_names_separate_streams(self):
        assert substream(4, "perms", 2).random() != substream(4, "perms", 3).random()
        assert substream(4, "perms").random() != substream(4, "train").random()

    def test_negative_values_rejected(self):
        with pytest.raises(ValueError, match="seed"):
            substream(-1)
        with pytest.raises(ValueError, match="index"):
            substream(0, -2)


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------


class TestCommunity:
    """gen_community."""

    def test_sizes_and_connectivity(self, small_community):
        assert len(small_community) == 12
        assert all(6 <= g.n <= 9 and is_connected(g) for g in small_community.graphs)

    def test_cross_edges(self):
        ds = gen_community(count=5, min_n=10, max_n=10, p_in=1.0, inter_frac=0.2, seed=1)
        for g in ds.graphs:
            # both communities complete, plus ceil(0.2 * 10) cross edges
            assert g.m == 2 * 10 + 2

    def test_seeded(self):
        a = gen_community(count=4, min_n=6, max_n=12, p_in=0.6, inter_frac=0.1, seed=9)
        b = gen_community(count=4, min_n=6, max_n=12, p_in=0.6, inter_frac=0.1, seed=9)
        assert a == b

    def test_prefix_independent_of_count(self):
        short = gen_community(count=2, min_n=6, max_n=12, p_in=0.6, inter_frac=0.1, seed=9)
        long = gen_community(count=5, min_n=6, max_n=12, p_in=0.6, inter_frac=0.1, seed=9)
        assert long.graphs[:2] == short.graphs

    @pytest.mark.parametrize(
        ("kwargs", "message"),
        [
            ({"count": 0}, "count"),
            ({"min_n": 3}, "node range"),
            ({"p_in": 0.0}, "p_in"),
            ({"inter_frac": 0.0}, "inter_frac"),
        ],
    )
    def test_invalid_parameters(self, kwargs, message):
        params = {"count": 2, "min_n": 6, "max_n": 8, "p_in": 0.5, "inter_frac": 0.1, "seed": 0}
        with pytest.raises(ValueError, match=message):
            gen_community(**(params | kwargs))


class TestLobsterGenerator:
    """gen_lobster."""

    def test_trees_within_limit(self):
        ds = gen_lobster(count=10, expected_backbone=8, max_n=25, seed=2)
        assert all(is_tree(g) and g.n <= 25 for g in ds.graphs)

    def test_no_branching_gives_paths(self):
        ds = gen_lobster(count=6, expected_backbone=5, p1=0.0, p2=0.0, seed=3)
        for g in ds.graphs:
            assert g == path_graph(g.n)

    def test_probability_checked(self):
        with pytest.raises(ValueError, match="p1"):
            gen_lobster(count=1, p1=1.0)


class TestPresets:
    """generate_preset."""

    def test_known_presets(self):
        assert set(PRESETS) == {"community", "community-small", "lobster"}

    def test_overrides(self):
        ds = generate_preset("community-small", seed=7, count=3)
        assert (len(ds), ds.name, ds.seed) == (3, "community-small", 7)
        assert all(12 <= g.n <= 20 for g in ds.graphs)

    def test_unknown_preset(self):
        with pytest.raises(ValueError, match="unknown dataset preset 'grid'"):
            generate_preset("grid", seed=0)

    def test_unknown_override(self):
        with pytest.raises(ValueError, match="no parameter"):
            generate_preset("lobster", seed=0, p_in=0.3)


# ---------------------------------------------------------------------------
# File format
# ---------------------------------------------------------------------------


class TestDatasetFile:
    """dataset_to_text, dataset_from_text, save/load."""

    def test_text_layout(self):
        ds = Dataset(graphs=(path_graph(2), path_graph(3)), name="tiny", seed=4)
        assert dataset_to_text(ds) == (
            "# dataset name=tiny seed=4\n\n# graph 0 2\n0 1\n\n# graph 1 3\n0 1\n1 2\n"
        )

    def test_save_load_round_trip(self, tmp_path: Path, small_community):
        path = tmp_path / "tiny.txt"
        save_dataset(small_community, path)
        assert load_dataset(path) == small_community

    def test_name_defaults_to_file_stem(self, tmp_path: Path):
        path = tmp_path / "my paths.txt"
        path.write_text("# graph 0 2\n0 1\n")
        ds = load_dataset(path)
        assert (ds.name, ds.seed) == ("my_paths", None)

    def test_single_node_graph(self):
        assert dataset_from_text("# graph 0 1\n").graphs == (Graph(n=1),)

    def test_empty_text(self):
        with pytest.raises(DatasetError, match="no graphs"):
            dataset_from_text("# dataset name=x\n")

    def test_indices_must_count_up(self):
        with pytest.raises(GraphFormatError, match="malformed graph header"):
            dataset_from_text("# graph 1 2\n0 1\n")

    def test_edge_before_header(self):
        with pytest.raises(GraphFormatError, match="before the first graph header"):
            dataset_from_text("0 1\n")

    def test_disconnected_graph_rejected(self):
        with pytest.raises(DisconnectedGraphError):
            dataset_from_text("# graph 0 3\n0 1\n")


# ---------------------------------------------------------------------------
# Splitting
# ---------------------------------------------------------------------------


class TestSplit:
    """split_dataset."""

    @pytest.mark.parametrize(("total", "sizes"), [(500, (350, 50, 100)), (100, (70, 10, 20)), (10, (7, 1, 2))])
    def test_sizes(self, total, sizes):
        parts = split_dataset(_paths(total), seed=0)
        assert tuple(len(p) for p in parts) == sizes

    def test_parts_partition_the_dataset(self):
        ds = Dataset(graphs=tuple(path_graph(n) for n in range(1, 31)), name="paths")
        train, validation, test = split_dataset(ds, seed=5)
        sizes = sorted(g.n for part in (train, validation, test) for g in part.graphs)
        assert sizes == list(range(1, 31))
        assert train.name == "paths-train"

    def test_seeded(self):
        ds = Dataset(graphs=tuple(path_graph(n) for n in range(1, 21)), name="paths")
        assert split_dataset(ds, seed=3) == split_dataset(ds, seed=3)
        assert split_dataset(ds, seed=3) != split_dataset(ds, seed=4)

    def test_too_small(self):
        with pytest.raises(DatasetError, match="need at least 10"):
            split_dataset(_paths(9), seed=0)
