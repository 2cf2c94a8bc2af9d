from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from clustp import settings
from clustp.core import ClusteredInstance, EdgeRef
from clustp.errors import DisconnectedInducedSubgraphError, RootNotMemberError


@dataclass(frozen=True)
class ShortestPathTree:
    root: int
    members: Tuple[int, ...]
    parent: Dict[int, Optional[int]]
    dist: Dict[int, float]

    def edges(self) -> List[EdgeRef]:
        return [EdgeRef(self.parent[v], v) for v in self.members if self.parent[v] is not None]

    def dist_array(self) -> np.ndarray:
        """Distances aligned with ``members`` (sorted vertex order)."""
        return np.array([self.dist[v] for v in self.members], dtype=float)

    def total(self) -> float:
        return math.fsum(self.dist.values())


def dijkstra_spt(inst: ClusteredInstance, members: Iterable[int], root: int) -> ShortestPathTree:
    """
    Dijkstra restricted to the subgraph induced by ``members``.

    Binary heap with lazy deletion. Equal keys pop the smaller vertex id first
    and a vertex keeps the first parent that reached its final distance, so
    repeated calls return identical trees.
    """
    verts = sorted({int(v) for v in members})
    if root not in verts:
        raise RootNotMemberError(f"root {root} is not one of the {len(verts)} members")
    local = {v: i for i, v in enumerate(verts)}
    sub = inst.weights[np.ix_(verts, verts)].tolist()
    m = len(verts)

    dist = [math.inf] * m
    parent: List[Optional[int]] = [None] * m
    done = [False] * m
    start = local[root]
    dist[start] = 0.0
    heap = [(0.0, start)]
    settled = 0
    while heap:
        d, i = heapq.heappop(heap)
        if done[i]:
            continue
        done[i] = True
        settled += 1
        row = sub[i]
        for j in range(m):
            if done[j]:
                continue
            w = row[j]
            if w == math.inf:
                continue
            nd = d + w
            if nd < dist[j]:
                dist[j] = nd
                parent[j] = i
                heapq.heappush(heap, (nd, j))

    if settled < m:
        unreachable = [verts[i] for i in range(m) if not done[i]]
        raise DisconnectedInducedSubgraphError(
            f"vertices {unreachable} unreachable from {root} inside their cluster"
        )
    return ShortestPathTree(
        root=int(root),
        members=tuple(verts),
        parent={verts[i]: (verts[p] if p is not None else None) for i, p in enumerate(parent)},
        dist={verts[i]: dist[i] for i in range(m)},
    )


def cost_spt(inst: ClusteredInstance, members: Iterable[int], v: int) -> float:
    """Sum of shortest-path distances from ``v`` to every member, inside G[members]."""
    return dijkstra_spt(inst, members, v).total()


class CostSptTable:
    """
    costSPT(v) for every vertex, keyed by vertex (a vertex names its cluster).

    Filled lazily by ``get``; ``precompute`` fills everything up front so the
    table can be shared read-only between concurrent runs.
    """

    def __init__(self, inst: ClusteredInstance) -> None:
        self._inst = inst
        self._values: Dict[int, float] = {}
        self._vectors: Dict[int, np.ndarray] = {}

    @staticmethod
    def worth_precomputing(inst: ClusteredInstance, limit: Optional[int] = None) -> bool:
        limit = settings.PRECOMPUTE_LIMIT if limit is None else limit
        return sum(len(c) ** 2 for c in inst.clusters) <= limit

    def get(self, v: int) -> float:
        value = self._values.get(v)
        if value is None:
            cluster = self._inst.clusters[self._inst.cluster_of(v)]
            value = cost_spt(self._inst, cluster, v)
            self._values[v] = value
        return value

    def cluster_vector(self, cluster: int) -> np.ndarray:
        """costSPT of each member of ``cluster``, aligned with its sorted members."""
        vec = self._vectors.get(cluster)
        if vec is None:
            vec = np.array([self.get(v) for v in self._inst.clusters[cluster]], dtype=float)
            vec.setflags(write=False)
            self._vectors[cluster] = vec
        return vec

    def precompute(self) -> "CostSptTable":
        for cluster in range(self._inst.k):
            self.cluster_vector(cluster)
        settings.log(f"[spt] precomputed costSPT for {len(self._values)} vertices of {self._inst.name}")
        return self
