"""
Clustered instance data model.

Vertices are 0-based ids ``0..n-1``. An instance is either Euclidean (every
pair of vertices is an edge, weighted by the exact double-precision distance)
or explicit (a symmetric matrix where ``inf`` marks a missing edge).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from clustp.errors import (
    AsymmetricMatrixError,
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


class WeightKind(str, Enum):
    EUCLIDEAN_2D = "EUC_2D"
    EXPLICIT = "EXPLICIT"


class EdgeRef(NamedTuple):
    u: int
    v: int

    def normalized(self) -> "EdgeRef":
        return self if self.u <= self.v else EdgeRef(self.v, self.u)


@dataclass(frozen=True, eq=False)
class ClusteredInstance:
    name: str
    clusters: Tuple[Tuple[int, ...], ...]
    source: int
    weight_kind: WeightKind
    coords: Optional[np.ndarray]
    explicit_weights: Optional[np.ndarray]
    weights: np.ndarray = field(repr=False)
    membership: np.ndarray = field(repr=False)
    cluster_arrays: Tuple[np.ndarray, ...] = field(repr=False)

    @property
    def n(self) -> int:
        return int(self.membership.shape[0])

    @property
    def k(self) -> int:
        return len(self.clusters)

    @property
    def vertices(self) -> range:
        return range(self.n)

    @property
    def root_cluster(self) -> int:
        return int(self.membership[self.source])

    def cluster_of(self, v: int) -> int:
        return cluster_of(self, v)

    def edge_weight(self, u: int, v: int) -> float:
        return edge_weight(self, u, v)

    def members(self, cluster: int) -> np.ndarray:
        return self.cluster_arrays[cluster]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ClusteredInstance):
            return NotImplemented
        return (
            self.name == other.name
            and self.clusters == other.clusters
            and self.source == other.source
            and self.weight_kind == other.weight_kind
            and _same_array(self.coords, other.coords)
            and _same_array(self.explicit_weights, other.explicit_weights)
        )

    __hash__ = None  # type: ignore[assignment]


def _same_array(a: Optional[np.ndarray], b: Optional[np.ndarray]) -> bool:
    if a is None or b is None:
        return a is None and b is None
    return a.shape == b.shape and bool(np.array_equal(a, b))


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def euclidean_matrix(coords: np.ndarray) -> np.ndarray:
    dx = coords[:, 0][:, None] - coords[:, 0][None, :]
    dy = coords[:, 1][:, None] - coords[:, 1][None, :]
    return np.hypot(dx, dy)


def _check_matrix(weights: np.ndarray) -> None:
    if weights.ndim != 2 or weights.shape[0] != weights.shape[1]:
        raise WeightSpecError(f"weight matrix must be square, got shape {weights.shape}")
    if np.isnan(weights).any() or (weights < 0).any():
        raise NegativeWeightError("edge weights must be nonnegative numbers")
    if (np.diag(weights) != 0).any():
        raise NonzeroDiagonalError("weight matrix diagonal must be zero")
    if not np.array_equal(weights, weights.T):
        raise AsymmetricMatrixError("weight matrix must be symmetric")


def _partition(clusters: Sequence[Iterable[int]], n: int) -> Tuple[Tuple[Tuple[int, ...], ...], np.ndarray]:
    if not clusters:
        raise EmptyClusterError("an instance needs at least one cluster")
    membership = np.full(n, -1, dtype=np.int64)
    normalized = []
    for idx, cluster in enumerate(clusters):
        members = tuple(sorted(int(v) for v in cluster))
        if not members:
            raise EmptyClusterError(f"cluster {idx} is empty")
        for v in members:
            if not 0 <= v < n:
                raise OutOfRangeError(f"cluster {idx} names vertex {v} outside 0..{n - 1}")
            if membership[v] != -1:
                raise OverlappingClustersError(f"vertex {v} is in clusters {membership[v]} and {idx}")
            membership[v] = idx
        normalized.append(members)
    missing = np.flatnonzero(membership == -1)
    if missing.size:
        raise UncoveredVertexError(f"vertices {missing.tolist()} belong to no cluster")
    return tuple(normalized), membership


def build_instance(
    name: str,
    clusters: Sequence[Iterable[int]],
    source: int,
    *,
    coords=None,
    weights=None,
) -> ClusteredInstance:
    """Validate and freeze an instance. Pass exactly one of ``coords`` (n x 2) or ``weights`` (n x n)."""
    if (coords is None) == (weights is None):
        raise WeightSpecError("provide exactly one of coords or an explicit weight matrix")

    if coords is not None:
        pts = np.array(coords, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] == 0:
            raise WeightSpecError(f"coords must be an (n, 2) array, got shape {pts.shape}")
        if not np.isfinite(pts).all():
            raise WeightSpecError("coords must be finite")
        kind = WeightKind.EUCLIDEAN_2D
        matrix = euclidean_matrix(pts)
        explicit = None
    else:
        matrix = np.array(weights, dtype=float)
        _check_matrix(matrix)
        if matrix.shape[0] == 0:
            raise WeightSpecError("weight matrix is empty")
        kind = WeightKind.EXPLICIT
        pts = None
        explicit = matrix.copy()

    n = matrix.shape[0]
    parts, membership = _partition(clusters, n)
    if not 0 <= int(source) < n:
        raise SourceOutOfRangeError(f"source {source} outside 0..{n - 1}")

    return ClusteredInstance(
        name=str(name),
        clusters=parts,
        source=int(source),
        weight_kind=kind,
        coords=_frozen(pts) if pts is not None else None,
        explicit_weights=_frozen(explicit) if explicit is not None else None,
        weights=_frozen(matrix),
        membership=_frozen(membership),
        cluster_arrays=tuple(_frozen(np.array(c, dtype=np.int64)) for c in parts),
    )


def _check_vertex(inst: ClusteredInstance, v: int) -> int:
    if not 0 <= v < inst.n:
        raise OutOfRangeError(f"vertex {v} outside 0..{inst.n - 1}")
    return int(v)


def edge_weight(inst: ClusteredInstance, u: int, v: int) -> float:
    """w(u, v); ``inf`` when an explicit instance has no such edge."""
    u = _check_vertex(inst, u)
    v = _check_vertex(inst, v)
    if u == v:
        raise SameVertexError(f"edge ({u}, {v}) is a loop")
    return float(inst.weights[u, v])


def cluster_of(inst: ClusteredInstance, v: int) -> int:
    return int(inst.membership[_check_vertex(inst, v)])
