from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from clustp.core import ClusteredInstance, EdgeRef
from clustp.errors import InfeasibleTreeError


class ViolationKind(str, Enum):
    NOT_SPANNING = "NotSpanning"
    HAS_CYCLE = "HasCycle"
    CLUSTER_DISCONNECTED = "ClusterDisconnected"
    EDGE_NOT_IN_GRAPH = "EdgeNotInGraph"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    detail: str
    cluster: Optional[int] = None

    def __str__(self) -> str:
        if self.cluster is not None:
            return f"{self.kind.value}({self.cluster}): {self.detail}"
        return f"{self.kind.value}: {self.detail}"


@dataclass(eq=False)
class SolutionTree:
    instance: ClusteredInstance
    edges: Tuple[EdgeRef, ...]
    local_roots: Dict[int, int]
    inter_cluster_edges: Tuple[EdgeRef, ...]
    # populated by nrga_run; empty for trees built from bare edge lists
    attach_order: Tuple[int, ...] = ()
    root_distance: Dict[int, float] = field(default_factory=dict)
    cost_cache: Optional[float] = None

    @classmethod
    def from_edges(cls, inst: ClusteredInstance, edges: Iterable[Tuple[int, int]]) -> "SolutionTree":
        """Wrap a bare edge list, deriving local roots and inter-cluster edges by a walk from s."""
        normalized = tuple(sorted(EdgeRef(int(u), int(v)).normalized() for u, v in edges))
        adjacency = _adjacency(inst.n, normalized)
        order, parent = _walk(adjacency, inst.source)
        local_roots: Dict[int, int] = {}
        for v in order:
            local_roots.setdefault(inst.cluster_of(v), v)
        inter = []
        for v in order:
            p = parent[v]
            if p is not None and inst.membership[p] != inst.membership[v]:
                inter.append(EdgeRef(p, v))
        return cls(
            instance=inst,
            edges=normalized,
            local_roots=dict(sorted(local_roots.items())),
            inter_cluster_edges=tuple(inter),
        )


def _adjacency(n: int, edges: Iterable[EdgeRef]) -> List[List[int]]:
    adjacency: List[List[int]] = [[] for _ in range(n)]
    for u, v in edges:
        if 0 <= u < n and 0 <= v < n and u != v:
            adjacency[u].append(v)
            adjacency[v].append(u)
    for row in adjacency:
        row.sort()
    return adjacency


def _walk(adjacency: List[List[int]], start: int) -> Tuple[List[int], Dict[int, Optional[int]]]:
    parent: Dict[int, Optional[int]] = {start: None}
    order = [start]
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in adjacency[u]:
            if v not in parent:
                parent[v] = u
                order.append(v)
                queue.append(v)
    return order, parent


class _DisjointSet:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def check_feasible(tree: SolutionTree, inst: Optional[ClusteredInstance] = None) -> List[Violation]:
    """Every reason ``tree`` is not a feasible clustered shortest-path tree; empty when feasible."""
    inst = inst or tree.instance
    n = inst.n
    violations: List[Violation] = []

    valid: List[EdgeRef] = []
    for u, v in tree.edges:
        if not (0 <= u < n and 0 <= v < n) or u == v or not math.isfinite(inst.weights[u, v]):
            violations.append(Violation(ViolationKind.EDGE_NOT_IN_GRAPH, f"({u}, {v})"))
        else:
            valid.append(EdgeRef(u, v))

    ds = _DisjointSet(n)
    for u, v in valid:
        if not ds.union(u, v):
            violations.append(Violation(ViolationKind.HAS_CYCLE, f"edge ({u}, {v}) closes a cycle"))
    components = len({ds.find(v) for v in range(n)})
    if components > 1:
        violations.append(
            Violation(ViolationKind.NOT_SPANNING, f"{components} components over {n} vertices")
        )

    membership = inst.membership
    local = _DisjointSet(n)
    for u, v in valid:
        if membership[u] == membership[v]:
            local.union(u, v)
    for idx, members in enumerate(inst.clusters):
        pieces = len({local.find(v) for v in members})
        if pieces > 1:
            violations.append(
                Violation(ViolationKind.CLUSTER_DISCONNECTED, f"{pieces} pieces inside the cluster", idx)
            )
    return violations


def tree_distances(tree: SolutionTree, inst: Optional[ClusteredInstance] = None) -> np.ndarray:
    """d_T(s, v) for every vertex; ``inf`` where the tree does not reach."""
    inst = inst or tree.instance
    dist = np.full(inst.n, math.inf)
    dist[inst.source] = 0.0
    adjacency = _adjacency(inst.n, tree.edges)
    order, parent = _walk(adjacency, inst.source)
    weights = inst.weights
    for v in order[1:]:
        p = parent[v]
        dist[v] = dist[p] + weights[p, v]
    return dist


def total_cost(tree: SolutionTree, inst: Optional[ClusteredInstance] = None) -> float:
    """Objective: sum over v of d_T(s, v), summed with compensation."""
    inst = inst or tree.instance
    if tree.cost_cache is not None and inst is tree.instance:
        return tree.cost_cache
    violations = check_feasible(tree, inst)
    if violations:
        raise InfeasibleTreeError("; ".join(str(v) for v in violations))
    cost = math.fsum(tree_distances(tree, inst).tolist())
    if inst is tree.instance:
        tree.cost_cache = cost
    return cost
