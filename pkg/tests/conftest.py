from __future__ import annotations

import math
from typing import Dict, List, Tuple

import networkx as nx
import numpy as np
import pytest

from clustp import settings
from clustp.core import ClusteredInstance, build_instance

INF = math.inf

# 15 vertices, four clusters, source 0. Cluster ids match the scripted attachment order.
EXPLICIT15_CLUSTERS = [[0, 1, 2, 3], [9, 10, 11, 12], [4, 5, 6, 7, 8], [13, 14]]
EXPLICIT15_EDGES: Dict[Tuple[int, int], float] = {
    (0, 1): 3, (1, 2): 5, (0, 3): 6, (2, 3): 4,
    (9, 11): 2, (11, 12): 4, (9, 10): 3, (10, 12): 7,
    (4, 5): 2, (4, 6): 3, (5, 7): 4, (6, 8): 2,
    (13, 14): 3,
    (0, 9): 5, (3, 10): 4, (2, 4): 3, (5, 12): 5, (12, 14): 4,
}


def explicit_matrix(n: int, edges: Dict[Tuple[int, int], float]) -> np.ndarray:
    w = np.full((n, n), INF)
    np.fill_diagonal(w, 0.0)
    for (u, v), weight in edges.items():
        w[u, v] = w[v, u] = weight
    return w


def explicit15_instance() -> ClusteredInstance:
    return build_instance("explicit15", EXPLICIT15_CLUSTERS, 0, weights=explicit_matrix(15, EXPLICIT15_EDGES))


def unit_square() -> ClusteredInstance:
    return build_instance("square", [[0, 1], [2, 3]], 0, coords=[(0, 0), (1, 0), (0, 1), (1, 1)])


def random_euclidean(seed: int, n: int, k: int, extent: float = 100.0) -> ClusteredInstance:
    """Complete Euclidean instance with k near-equal clusters (vertex v in cluster v % k)."""
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0, extent, size=(n, 2))
    clusters: List[List[int]] = [list(range(c, n, k)) for c in range(k)]
    return build_instance(f"rand{seed}-{n}-{k}", clusters, int(rng.integers(0, n)), coords=pts)


def to_networkx(inst: ClusteredInstance, members=None) -> nx.Graph:
    verts = list(inst.vertices) if members is None else list(members)
    g = nx.Graph()
    g.add_nodes_from(verts)
    for i, u in enumerate(verts):
        for v in verts[i + 1:]:
            w = float(inst.weights[u, v])
            if math.isfinite(w):
                g.add_edge(u, v, weight=w)
    return g


@pytest.fixture
def explicit15() -> ClusteredInstance:
    return explicit15_instance()


@pytest.fixture
def square() -> ClusteredInstance:
    return unit_square()


@pytest.fixture(autouse=True)
def _quiet(monkeypatch):
    monkeypatch.setattr(settings, "VERBOSE", False)
