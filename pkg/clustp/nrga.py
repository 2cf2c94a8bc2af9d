"""
Randomized-greedy construction for the clustered shortest-path tree.

The root cluster gets a Dijkstra tree from the source. Then, until every
cluster is attached, each unattached cluster ``i`` scores every edge (u, v)
from the current cluster with

    f(u, v) = h * (d[u] + w(u, v)) + costSPT(v),    h ~ U{|V_i| .. sum_{j in Q} |V_j|}

samples one edge with probability proportional to ``f ** -gamma`` and keeps
it when it shortens the cluster's distance to the source. The closest
cluster is attached through its kept edge and gets its own Dijkstra tree
rooted at the edge's endpoint.

``gamma = 0`` samples uniformly; large ``gamma`` always takes the smallest
reward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from clustp import settings
from clustp.core import ClusteredInstance, EdgeRef, edge_weight
from clustp.errors import (
    DataError,
    DisconnectedClustersError,
    EmptyCandidateSetError,
    InfiniteWeightError,
    NonpositiveRewardError,
    OutOfRangeError,
)
from clustp.objective import SolutionTree
from clustp.rng import MASK64, make_rng
from clustp.spt import CostSptTable, ShortestPathTree, cost_spt, dijkstra_spt

# Stand-in for a zero reward (zero-weight inter-cluster edge next to a local root).
REWARD_FLOOR = 1e-12

Selector = Callable[[np.ndarray, np.ndarray, float, np.random.Generator], int]


class NrgaParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    gamma: float = Field(default_factory=lambda: settings.DEFAULT_GAMMA, ge=0, allow_inf_nan=False)
    seed: int = Field(default=0, ge=0, le=MASK64)
    rescan_all: bool = False


@dataclass(frozen=True)
class EdgeCandidate:
    edge: EdgeRef
    reward: float
    prob: float


@dataclass
class NrgaState:
    queue: Set[int]
    cur: int
    dis: Dict[int, float]
    root: Dict[int, int]
    temporary_edge: Dict[int, EdgeRef]
    trees: Dict[int, ShortestPathTree] = field(default_factory=dict)
    dist_arrays: Dict[int, np.ndarray] = field(default_factory=dict)
    inter_edges: List[EdgeRef] = field(default_factory=list)
    attach_order: List[int] = field(default_factory=list)

    @classmethod
    def start(cls, inst: ClusteredInstance) -> "NrgaState":
        return cls(
            queue=set(range(inst.k)),
            cur=inst.root_cluster,
            dis={i: math.inf for i in range(inst.k)},
            root={},
            temporary_edge={},
        )

    def attach(self, cluster: int, spt: ShortestPathTree) -> None:
        edge = self.temporary_edge.get(cluster)
        if edge is not None:
            self.inter_edges.append(edge)
        self.trees[cluster] = spt
        self.dist_arrays[cluster] = spt.dist_array()
        self.attach_order.append(cluster)
        self.queue.discard(cluster)
        self.cur = cluster

    def remaining_size(self, inst: ClusteredInstance) -> int:
        return sum(len(inst.clusters[j]) for j in self.queue)

    def closest_unattached(self) -> int:
        # min over ascending ids keeps the smallest id on ties
        return min(sorted(self.queue), key=lambda i: self.dis[i])

    def to_tree(self, inst: ClusteredInstance) -> SolutionTree:
        edges: List[EdgeRef] = []
        for spt in self.trees.values():
            edges.extend(e.normalized() for e in spt.edges())
        edges.extend(e.normalized() for e in self.inter_edges)
        return SolutionTree(
            instance=inst,
            edges=tuple(sorted(edges)),
            local_roots=dict(sorted(self.root.items())),
            inter_cluster_edges=tuple(self.inter_edges),
            attach_order=tuple(self.attach_order),
            root_distance={c: self.dis[c] for c in self.attach_order},
        )


# ---------------------- reward and h ----------------------
def reward(
    inst: ClusteredInstance,
    spt_cur: ShortestPathTree,
    h: int,
    u: int,
    v: int,
    target: int,
    costs: Optional[CostSptTable] = None,
) -> float:
    """f(u, v) = h * (d[u] + w(u, v)) + costSPT(v), d read from the current cluster's tree."""
    if u not in spt_cur.dist:
        raise OutOfRangeError(f"vertex {u} is not in the current cluster")
    if inst.cluster_of(v) != target:
        raise OutOfRangeError(f"vertex {v} is not in cluster {target}")
    w = edge_weight(inst, u, v)
    if not math.isfinite(w):
        raise InfiniteWeightError(f"no edge between {u} and {v}")
    tail = costs.get(v) if costs is not None else cost_spt(inst, inst.clusters[target], v)
    return h * (spt_cur.dist[u] + w) + tail


def draw_h(rng: np.random.Generator, target_size: int, remaining_size: int) -> int:
    """Uniform integer on [|V_i|, sum of unattached cluster sizes], inclusive."""
    return int(rng.integers(target_size, remaining_size, endpoint=True))


# ---------------------- selection ----------------------
def selection_probabilities(rewards, gamma: float) -> np.ndarray:
    """p proportional to f ** -gamma, computed in log space relative to the smallest reward."""
    f = np.asarray(rewards, dtype=float)
    if f.size == 0:
        raise EmptyCandidateSetError("no candidate edges to choose from")
    if not (f > 0).all():
        raise NonpositiveRewardError("rewards must be positive")
    log_f = np.log(f)
    weights = np.exp(-gamma * (log_f - log_f.min()))
    return weights / weights.sum()


def _select_index(rewards: np.ndarray, gamma: float, rng: np.random.Generator) -> int:
    probs = selection_probabilities(rewards, gamma)
    cumulative = np.cumsum(probs)
    idx = int(np.searchsorted(cumulative, rng.random() * cumulative[-1], side="right"))
    return min(idx, probs.size - 1)


def randomized_greedy(edges: np.ndarray, rewards: np.ndarray, gamma: float, rng: np.random.Generator) -> int:
    return _select_index(rewards, gamma, rng)


def greedy_argmin(edges: np.ndarray, rewards: np.ndarray, gamma: float, rng: np.random.Generator) -> int:
    """Deterministic reference: smallest reward, first candidate on ties."""
    if len(rewards) == 0:
        raise EmptyCandidateSetError("no candidate edges to choose from")
    # burn the one uniform randomized_greedy takes so later draw_h calls read the same stream
    rng.random()
    return int(np.argmin(rewards))


SELECTORS: Dict[str, Selector] = {
    "randomized": randomized_greedy,
    "greedy": greedy_argmin,
}


def make_selector(name: str) -> Selector:
    try:
        return SELECTORS[name]
    except KeyError:
        raise DataError(f"unknown selector {name!r}; choose from {sorted(SELECTORS)}") from None


def select_edge(
    candidates: Sequence[Tuple[EdgeRef, float]],
    gamma: float,
    rng: np.random.Generator,
) -> EdgeRef:
    if not candidates:
        raise EmptyCandidateSetError("no candidate edges to choose from")
    rewards = np.array([r for _, r in candidates], dtype=float)
    u, v = candidates[_select_index(rewards, gamma, rng)][0]
    return EdgeRef(int(u), int(v))


# ---------------------- scoring ----------------------
def _score(
    inst: ClusteredInstance,
    cur: int,
    d_cur: np.ndarray,
    target: int,
    h: int,
    costs: CostSptTable,
) -> Tuple[np.ndarray, np.ndarray]:
    """Finite-weight edges (row-major over sorted members) and their rewards."""
    mc = inst.members(cur)
    mi = inst.members(target)
    sub = inst.weights[np.ix_(mc, mi)]
    rows, cols = np.nonzero(np.isfinite(sub))
    if rows.size == 0:
        return np.empty((0, 2), dtype=np.int64), np.empty(0)
    path = d_cur[rows] + sub[rows, cols]
    rewards = h * path + costs.cluster_vector(target)[cols]
    edges = np.column_stack((mc[rows], mi[cols]))
    return edges, np.maximum(rewards, REWARD_FLOOR)


def score_candidates(
    inst: ClusteredInstance,
    spt_cur: ShortestPathTree,
    target: int,
    h: int,
    gamma: float,
    costs: Optional[CostSptTable] = None,
) -> List[EdgeCandidate]:
    costs = costs or CostSptTable(inst)
    cur = inst.cluster_of(spt_cur.root)
    edges, rewards = _score(inst, cur, spt_cur.dist_array(), target, h, costs)
    if rewards.size == 0:
        return []
    probs = selection_probabilities(rewards, gamma)
    return [
        EdgeCandidate(EdgeRef(int(a), int(b)), float(r), float(p))
        for (a, b), r, p in zip(edges.tolist(), rewards.tolist(), probs.tolist())
    ]


# ---------------------- main loop ----------------------
def nrga_run(
    inst: ClusteredInstance,
    params: Optional[NrgaParams] = None,
    *,
    selector: Optional[Selector] = None,
    costs: Optional[CostSptTable] = None,
) -> SolutionTree:
    params = params or NrgaParams()
    select = selector or randomized_greedy
    rng = make_rng(params.seed)
    if costs is None:
        costs = CostSptTable(inst)
        if CostSptTable.worth_precomputing(inst):
            costs.precompute()

    state = NrgaState.start(inst)
    root_cluster = inst.root_cluster
    state.dis[root_cluster] = 0.0
    state.root[root_cluster] = inst.source
    state.attach(root_cluster, dijkstra_spt(inst, inst.clusters[root_cluster], inst.source))

    weights = inst.weights
    while state.queue:
        sources = list(state.attach_order) if params.rescan_all else [state.cur]
        remaining = state.remaining_size(inst)
        for c in sources:
            spt_c = state.trees[c]
            for i in sorted(state.queue):
                h = draw_h(rng, len(inst.clusters[i]), remaining)
                edges, rewards = _score(inst, c, state.dist_arrays[c], i, h, costs)
                if rewards.size == 0:
                    continue
                a, b = (int(x) for x in edges[select(edges, rewards, params.gamma, rng)])
                candidate = state.dis[c] + spt_c.dist[a] + weights[a, b]
                if candidate < state.dis[i]:
                    state.dis[i] = float(candidate)
                    state.root[i] = b
                    state.temporary_edge[i] = EdgeRef(a, b)

        nxt = state.closest_unattached()
        if math.isinf(state.dis[nxt]):
            raise DisconnectedClustersError(
                f"clusters {sorted(state.queue)} have no finite edge to the attached clusters"
            )
        state.attach(nxt, dijkstra_spt(inst, inst.clusters[nxt], state.root[nxt]))

    tree = state.to_tree(inst)
    settings.log(
        f"[nrga] {inst.name}: gamma={params.gamma:g} seed={params.seed} order={list(tree.attach_order)}"
    )
    return tree
