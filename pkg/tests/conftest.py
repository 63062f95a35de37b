from __future__ import annotations

import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from wedgegraph import (
    EdgeList,
    build_edge_index,
    build_pull_topology,
    build_push_topology,
    compute_out_degrees,
)

# Worked example used throughout: 6 vertices, 7 edges.
GT_EDGES = [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 3)]
GT_VERTICES = 6


@dataclass
class BuiltGraph:
    edges: EdgeList
    topology: object
    index: object
    degrees: np.ndarray
    push: object


def build_graph(edge_tuples, vertex_count=None, width=4) -> BuiltGraph:
    edges = EdgeList.from_pairs(edge_tuples, vertex_count)
    topology = build_pull_topology(edges, width)
    return BuiltGraph(
        edges=edges,
        topology=topology,
        index=build_edge_index(topology),
        degrees=compute_out_degrees(edges),
        push=build_push_topology(edges),
    )


@pytest.fixture
def gt():
    return build_graph(GT_EDGES, GT_VERTICES, width=2)


def random_edge_tuples(rng: np.random.Generator, max_vertices=64, max_edges=256, weighted=False):
    n = int(rng.integers(2, max_vertices + 1))
    m = int(rng.integers(1, max_edges + 1))
    src = rng.integers(0, n, size=m)
    dst = rng.integers(0, n, size=m)
    if weighted:
        wgt = rng.integers(1, 101, size=m)
        return n, list(zip(src.tolist(), dst.tolist(), wgt.tolist()))
    return n, list(zip(src.tolist(), dst.tolist()))
