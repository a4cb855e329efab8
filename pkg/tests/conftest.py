"""
Pytest Configuration and Fixtures

Shared fixtures for the offline suite. Environment defaults are pinned
before any treecodec import so a developer's ``.env`` cannot change test
outcomes.
"""

import os

# ---------------------------------------------------------------------------
# Test environment defaults: MUST be set before any treecodec imports.
# ---------------------------------------------------------------------------
_test_env = {
    "TREECODEC_LOG_LEVEL": "WARNING",
    "TREECODEC_SEED": "0",
    "TREECODEC_MAX_SAMPLE_ATTEMPTS": "1000",
}
for _key, _value in _test_env.items():
    os.environ[_key] = _value

# ---------------------------------------------------------------------------
# Imports (safe now that env vars are set)
# ---------------------------------------------------------------------------
from pathlib import Path  # noqa: E402

import pytest  # noqa: E402
from hypothesis import HealthCheck, settings  # noqa: E402

from tests.helpers import complete_graph, cycle_graph, path_graph, star_graph  # noqa: E402
from treecodec.models.dataset import Dataset  # noqa: E402
from treecodec.models.graph import Graph  # noqa: E402
from treecodec.services.datasets import gen_community, save_dataset  # noqa: E402

settings.register_profile(
    "treecodec",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("treecodec")


@pytest.fixture
def triangle() -> Graph:
    return complete_graph(3)


@pytest.fixture
def p4() -> Graph:
    return path_graph(4)


@pytest.fixture
def c5() -> Graph:
    return cycle_graph(5)


@pytest.fixture
def star5() -> Graph:
    return star_graph(5)


@pytest.fixture
def small_community() -> Dataset:
    """Twelve small community graphs; enough to split."""
    return gen_community(count=12, min_n=6, max_n=9, p_in=0.7, inter_frac=0.2, seed=3, name="tiny")


@pytest.fixture
def dataset_file(tmp_path: Path, small_community: Dataset) -> Path:
    path = tmp_path / "tiny.txt"
    save_dataset(small_community, path)
    return path
