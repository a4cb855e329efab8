"""
Shared Test Helpers

Small graph builders and hypothesis strategies used across the suite.
"""

from __future__ import annotations

import itertools

import networkx as nx
import numpy as np
from hypothesis import strategies as st

from treecodec.models.graph import Graph, Permutation
from treecodec.services.graphs import prufer_to_tree, random_connected_graph

# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, ((0, i) for i in range(1, leaves + 1)))


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def spider(legs: int, leg_length: int) -> Graph:
    """Hub 0 with ``legs`` paths of ``leg_length`` edges each."""
    edges = []
    nxt = 1
    for _ in range(legs):
        prev = 0
        for _ in range(leg_length):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return Graph.from_edges(nxt, edges)


def to_networkx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


# ---------------------------------------------------------------------------
# Strategies
# ---------------------------------------------------------------------------


@st.composite
def trees(draw: st.DrawFn, min_n: int = 1, max_n: int = 12) -> Graph:
    n = draw(st.integers(min_n, max_n))
    if n <= 2:
        return prufer_to_tree([], n)
    sequence = draw(st.lists(st.integers(0, n - 1), min_size=n - 2, max_size=n - 2))
    return prufer_to_tree(sequence, n)


@st.composite
def connected_graphs(draw: st.DrawFn, min_n: int = 1, max_n: int = 10) -> Graph:
    n = draw(st.integers(min_n, max_n))
    p = draw(st.sampled_from([0.2, 0.4, 0.6, 0.9]))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_connected_graph(n, p, np.random.default_rng(seed))


@st.composite
def permutations(draw: st.DrawFn, n: int) -> Permutation:
    return Permutation.of(draw(st.permutations(list(range(n)))))


@st.composite
def graphs_with_orderings(draw: st.DrawFn, min_n: int = 1, max_n: int = 10) -> tuple[Graph, Permutation]:
    g = draw(connected_graphs(min_n, max_n))
    return g, draw(permutations(g.n))
