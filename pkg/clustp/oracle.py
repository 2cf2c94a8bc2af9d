"""
Exhaustive optimum for tiny instances.

A feasible tree is exactly one spanning tree per cluster plus k-1
inter-cluster edges that connect the clusters as a tree, so the search walks
edge subsets of each cluster and of the inter-cluster edges separately and
combines them. Exponential; guarded by a vertex cap and a subset budget.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from typing import Dict, List, Optional, Sequence, Tuple

from clustp import settings
from clustp.core import ClusteredInstance, EdgeRef
from clustp.errors import InstanceTooLargeError, NoFeasibleTreeError
from clustp.objective import SolutionTree, check_feasible

MAX_VERTICES = 10
# C(24, 9): the worst single enumeration a 10-vertex, 24-edge graph can need
MAX_SUBSETS = math.comb(24, 9)

Edge = Tuple[int, int]


def _is_forest(edges: Sequence[Edge], labels: Dict[int, int]) -> bool:
    parent = {lab: lab for lab in labels.values()}

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v in edges:
        ru, rv = find(labels[u]), find(labels[v])
        if ru == rv:
            return False
        parent[rv] = ru
    return True


def _spanning_subsets(edges: Sequence[Edge], size: int, labels: Dict[int, int]) -> List[Tuple[Edge, ...]]:
    # size = (#labels - 1) acyclic edges always span
    return [combo for combo in itertools.combinations(edges, size) if _is_forest(combo, labels)]


def _cost(n: int, source: int, edges: Sequence[Edge], weights) -> float:
    adjacency: List[List[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adjacency[u].append(v)
        adjacency[v].append(u)
    dist = [0.0] * n
    seen = [False] * n
    seen[source] = True
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in adjacency[u]:
            if not seen[v]:
                seen[v] = True
                dist[v] = dist[u] + weights[u][v]
                queue.append(v)
    return math.fsum(dist)


def brute_force_optimum(
    inst: ClusteredInstance,
    *,
    max_vertices: int = MAX_VERTICES,
    max_subsets: Optional[int] = None,
) -> Tuple[float, SolutionTree]:
    """Optimal cost and one optimal tree; ties go to the lexicographically smallest sorted edge list."""
    max_subsets = MAX_SUBSETS if max_subsets is None else max_subsets
    n = inst.n
    if n > max_vertices:
        raise InstanceTooLargeError(f"{inst.name}: {n} vertices exceeds the oracle cap of {max_vertices}")

    weights = inst.weights.tolist()
    membership = inst.membership.tolist()
    finite = [
        (u, v) for u in range(n) for v in range(u + 1, n) if math.isfinite(weights[u][v])
    ]
    intra: List[List[Edge]] = [[] for _ in range(inst.k)]
    inter: List[Edge] = []
    for u, v in finite:
        if membership[u] == membership[v]:
            intra[membership[u]].append((u, v))
        else:
            inter.append((u, v))

    budget = math.comb(len(inter), inst.k - 1)
    for idx, members in enumerate(inst.clusters):
        budget *= math.comb(len(intra[idx]), len(members) - 1)
    if budget > max_subsets:
        raise InstanceTooLargeError(
            f"{inst.name}: {budget} edge subsets to enumerate exceeds the budget of {max_subsets}"
        )

    cluster_trees = []
    for idx, members in enumerate(inst.clusters):
        labels = {v: v for v in members}
        trees = _spanning_subsets(intra[idx], len(members) - 1, labels)
        if not trees:
            raise NoFeasibleTreeError(f"{inst.name}: cluster {idx} has no spanning tree")
        cluster_trees.append(trees)
    connectors = _spanning_subsets(inter, inst.k - 1, {v: membership[v] for v in range(n)})
    if not connectors:
        raise NoFeasibleTreeError(f"{inst.name}: the clusters cannot be linked into a tree")

    best_cost = math.inf
    best_edges: Optional[Tuple[Edge, ...]] = None
    examined = 0
    for parts in itertools.product(*cluster_trees, connectors):
        edges = tuple(sorted(e for part in parts for e in part))
        cost = _cost(n, inst.source, edges, weights)
        examined += 1
        if cost < best_cost or (cost == best_cost and best_edges is not None and edges < best_edges):
            best_cost, best_edges = cost, edges

    settings.log(f"[oracle] {inst.name}: {examined} trees examined, optimum {best_cost:.6f}")
    witness = SolutionTree.from_edges(inst, [EdgeRef(u, v) for u, v in best_edges])
    witness.cost_cache = best_cost
    assert not check_feasible(witness), "enumerated witness must be feasible"
    return best_cost, witness
