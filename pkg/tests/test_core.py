from __future__ import annotations

import math

import numpy as np
import pytest

from clustp.core import EdgeRef, WeightKind, build_instance, cluster_of, edge_weight
from clustp.errors import (
    AsymmetricMatrixError,
    DataError,
    EmptyClusterError,
    NegativeWeightError,
    NonzeroDiagonalError,
    OutOfRangeError,
    OverlappingClustersError,
    SameVertexError,
    SourceOutOfRangeError,
    UncoveredVertexError,
    WeightSpecError,
)

from conftest import random_euclidean


def test_euclidean_instance_has_exact_distances(square):
    assert square.weight_kind is WeightKind.EUCLIDEAN_2D
    assert square.n == 4 and square.k == 2
    assert edge_weight(square, 0, 3) == math.hypot(1, 1)
    assert square.edge_weight(3, 0) == square.edge_weight(0, 3)
    assert square.root_cluster == 0


def test_clusters_are_sorted_and_indexed(explicit15):
    assert explicit15.clusters[2] == (4, 5, 6, 7, 8)
    assert cluster_of(explicit15, 9) == 1
    assert explicit15.cluster_of(14) == 3
    assert explicit15.members(1).tolist() == [9, 10, 11, 12]


def test_missing_explicit_edge_is_infinite(explicit15):
    assert edge_weight(explicit15, 0, 4) == math.inf
    assert edge_weight(explicit15, 2, 4) == 3


def test_instance_arrays_are_read_only(square):
    with pytest.raises(ValueError):
        square.weights[0, 1] = 5.0


def test_instances_compare_by_content(square):
    again = build_instance("square", [[1, 0], [3, 2]], 0, coords=[(0, 0), (1, 0), (0, 1), (1, 1)])
    assert again == square
    assert build_instance("other", [[0, 1], [2, 3]], 0, coords=square.coords) != square


@pytest.mark.parametrize(
    "clusters, error",
    [
        ([[0, 1], [1, 2, 3]], OverlappingClustersError),
        ([[0, 1], [2]], UncoveredVertexError),
        ([[0, 1, 2, 3], []], EmptyClusterError),
        ([], EmptyClusterError),
        ([[0, 1], [2, 3, 7]], OutOfRangeError),
    ],
)
def test_partition_errors(clusters, error):
    with pytest.raises(error):
        build_instance("bad", clusters, 0, coords=np.zeros((4, 2)))


def test_source_must_be_a_vertex():
    with pytest.raises(SourceOutOfRangeError):
        build_instance("bad", [[0, 1]], 2, coords=np.zeros((2, 2)))


def test_weight_spec_needs_exactly_one_source():
    with pytest.raises(WeightSpecError):
        build_instance("bad", [[0, 1]], 0)
    with pytest.raises(WeightSpecError):
        build_instance("bad", [[0, 1]], 0, coords=np.zeros((2, 2)), weights=np.zeros((2, 2)))


@pytest.mark.parametrize(
    "matrix, error",
    [
        ([[0, 1], [2, 0]], AsymmetricMatrixError),
        ([[0, -1], [-1, 0]], NegativeWeightError),
        ([[1, 1], [1, 0]], NonzeroDiagonalError),
        ([[0, 1, 2], [1, 0, 3]], WeightSpecError),
    ],
)
def test_matrix_validation(matrix, error):
    with pytest.raises(error):
        build_instance("bad", [[0, 1]], 0, weights=matrix)


def test_edge_weight_rejects_loops_and_unknown_vertices(square):
    with pytest.raises(SameVertexError):
        edge_weight(square, 2, 2)
    with pytest.raises(OutOfRangeError):
        edge_weight(square, 0, 4)
    with pytest.raises(OutOfRangeError):
        cluster_of(square, -1)


def test_validation_errors_are_value_errors():
    assert issubclass(OverlappingClustersError, ValueError)
    assert issubclass(OverlappingClustersError, DataError)


def test_edge_ref_normalizes():
    assert EdgeRef(5, 2).normalized() == EdgeRef(2, 5)
    assert EdgeRef(2, 5).normalized() == (2, 5)


def test_euclidean_weights_form_a_metric():
    inst = random_euclidean(17, 60, 6)
    triples = np.random.default_rng(17).integers(0, inst.n, size=(1000, 3)).tolist()
    for u, v, x in triples:
        if len({u, v, x}) < 3:
            continue
        w = edge_weight(inst, u, v)
        assert w >= 0
        assert w == edge_weight(inst, v, u)
        assert w <= edge_weight(inst, u, x) + edge_weight(inst, x, v) + 1e-9
