from __future__ import annotations

from collections import Counter

import networkx as nx
import numpy as np
import pytest
from pydantic import ValidationError

from clustp.core import EdgeRef, build_instance
from clustp.errors import (
    DataError,
    DisconnectedClustersError,
    EmptyCandidateSetError,
    InfiniteWeightError,
    NonpositiveRewardError,
    OutOfRangeError,
)
from clustp.nrga import (
    REWARD_FLOOR,
    NrgaParams,
    NrgaState,
    draw_h,
    greedy_argmin,
    make_selector,
    nrga_run,
    randomized_greedy,
    reward,
    score_candidates,
    select_edge,
    selection_probabilities,
)
from clustp.objective import check_feasible, total_cost, tree_distances
from clustp.rng import make_rng
from clustp.spt import CostSptTable, dijkstra_spt

from conftest import explicit_matrix, random_euclidean, to_networkx

SCRIPTED = {(0, 9), (2, 4), (12, 14)}
EXPLICIT15_TREE = sorted(
    [
        (0, 1), (1, 2), (0, 3),
        (9, 11), (11, 12), (9, 10),
        (4, 5), (4, 6), (5, 7), (6, 8),
        (13, 14),
        (0, 9), (2, 4), (12, 14),
    ]
)


def scripted_choice(edges, rewards, gamma, rng):
    for idx, (a, b) in enumerate(edges.tolist()):
        if (a, b) in SCRIPTED:
            return idx
    return 0


# ---------------------- reward and h ----------------------
def test_reward_of_scripted_edge(explicit15):
    spt = dijkstra_spt(explicit15, explicit15.clusters[0], 0)
    # 5 * (8 + 3) + costSPT(4) = 55 + 16
    assert reward(explicit15, spt, 5, 2, 4, 2) == 71.0
    assert reward(explicit15, spt, 5, 2, 4, 2, costs=CostSptTable(explicit15)) == 71.0


def test_reward_rejects_bad_endpoints(explicit15):
    spt = dijkstra_spt(explicit15, explicit15.clusters[0], 0)
    with pytest.raises(OutOfRangeError):
        reward(explicit15, spt, 5, 9, 4, 2)
    with pytest.raises(OutOfRangeError):
        reward(explicit15, spt, 5, 2, 9, 2)
    with pytest.raises(InfiniteWeightError):
        reward(explicit15, spt, 5, 0, 4, 2)


def test_draw_h_is_uniform_over_inclusive_range():
    rng = make_rng(7)
    counts = Counter(draw_h(rng, 3, 6) for _ in range(60_000))
    assert set(counts) == {3, 4, 5, 6}
    for h in range(3, 7):
        assert abs(counts[h] / 60_000 - 0.25) < 0.01
    assert draw_h(rng, 4, 4) == 4


# ---------------------- selection ----------------------
def test_selection_probabilities_closed_form():
    assert selection_probabilities([2, 4], 1) == pytest.approx([2 / 3, 1 / 3])
    assert selection_probabilities([2, 4, 8], 0) == pytest.approx([1 / 3] * 3)
    assert selection_probabilities([1e6, 2e6], 50)[0] == pytest.approx(1.0)


def test_selection_probabilities_errors():
    with pytest.raises(EmptyCandidateSetError):
        selection_probabilities([], 1)
    with pytest.raises(NonpositiveRewardError):
        selection_probabilities([1.0, 0.0], 1)


def test_select_edge_frequencies():
    a, b = EdgeRef(0, 1), EdgeRef(0, 2)
    rng = make_rng(42)
    draws = Counter(select_edge([(a, 2.0), (b, 4.0)], 1, rng) for _ in range(100_000))
    assert abs(draws[a] / 100_000 - 2 / 3) < 0.01
    assert abs(draws[b] / 100_000 - 1 / 3) < 0.01

    rng = make_rng(43)
    greedy = Counter(select_edge([(a, 2.0), (b, 4.0)], 50, rng) for _ in range(100_000))
    assert greedy == {a: 100_000}


def test_select_edge_single_candidate_and_empty():
    rng = make_rng(0)
    assert select_edge([(EdgeRef(3, 4), 10.0)], 1, rng) == (3, 4)
    with pytest.raises(EmptyCandidateSetError):
        select_edge([], 1, rng)


def test_greedy_argmin_takes_first_minimum():
    edges = np.array([[0, 1], [0, 2], [0, 3]])
    assert greedy_argmin(edges, np.array([3.0, 1.0, 1.0]), 1, make_rng(0)) == 1


def test_make_selector():
    assert make_selector("randomized") is randomized_greedy
    assert make_selector("greedy") is greedy_argmin
    with pytest.raises(DataError):
        make_selector("annealing")


def test_greedy_reference_takes_one_uniform():
    rng, twin = make_rng(5), make_rng(5)
    greedy_argmin(np.array([[0, 1], [0, 2]]), np.array([2.0, 1.0]), 50, rng)
    randomized_greedy(np.array([[0, 1], [0, 2]]), np.array([2.0, 1.0]), 50, twin)
    assert rng.random() == twin.random()


@pytest.mark.parametrize("seed", range(20))
def test_large_gamma_follows_greedy_reference(seed):
    inst = random_euclidean(seed, 40, 6)
    params = NrgaParams(gamma=1e3, seed=seed)
    randomized = nrga_run(inst, params)
    reference = nrga_run(inst, params, selector=greedy_argmin)
    assert randomized.edges == reference.edges
    assert randomized.attach_order == reference.attach_order
    assert total_cost(randomized) == total_cost(reference)


def test_score_candidates(explicit15):
    spt = dijkstra_spt(explicit15, explicit15.clusters[0], 0)
    cands = score_candidates(explicit15, spt, 1, 4, 1)
    assert [c.edge for c in cands] == [(0, 9), (3, 10)]
    # 4 * (0 + 5) + 11 and 4 * (6 + 4) + 15
    assert [c.reward for c in cands] == [31.0, 55.0]
    assert sum(c.prob for c in cands) == pytest.approx(1.0)
    assert score_candidates(explicit15, spt, 3, 4, 1) == []


# ---------------------- construction ----------------------
def test_scripted_walkthrough(explicit15):
    tree = nrga_run(explicit15, NrgaParams(gamma=1, seed=3), selector=scripted_choice)
    assert tree.attach_order == (0, 1, 2, 3)
    assert tree.root_distance == {0: 0.0, 1: 5.0, 2: 11.0, 3: 15.0}
    assert tree.local_roots == {0: 0, 1: 9, 2: 4, 3: 14}
    assert list(tree.inter_cluster_edges) == [(0, 9), (2, 4), (12, 14)]
    assert sorted(tree.edges) == EXPLICIT15_TREE
    assert total_cost(tree) == 152.0


def test_greedy_limit(explicit15):
    for rescan in (False, True):
        tree = nrga_run(explicit15, NrgaParams(seed=11, rescan_all=rescan), selector=greedy_argmin)
        assert sorted(tree.edges) == EXPLICIT15_TREE
        assert total_cost(tree) == 152.0


def test_unit_square_greedy_is_optimal(square):
    tree = nrga_run(square, NrgaParams(seed=0), selector=greedy_argmin)
    assert sorted(tree.edges) == [(0, 1), (0, 2), (2, 3)]
    assert total_cost(tree) == 4.0


@pytest.mark.parametrize("seed", range(20))
def test_single_cluster_is_the_shortest_path_tree(seed):
    rng = np.random.default_rng(seed)
    inst = random_euclidean(seed, int(rng.integers(2, 30)), 1)
    tree = nrga_run(inst, NrgaParams(gamma=50, seed=seed))
    expected = sum(nx.floyd_warshall(to_networkx(inst))[inst.source].values())
    assert total_cost(tree) == pytest.approx(expected, rel=1e-6)
    assert tree.inter_cluster_edges == ()


def test_same_seed_same_tree():
    inst = random_euclidean(5, 40, 6)
    first = nrga_run(inst, NrgaParams(gamma=5, seed=123))
    again = nrga_run(inst, NrgaParams(gamma=5, seed=123))
    assert first.edges == again.edges
    assert first.attach_order == again.attach_order


@pytest.mark.parametrize("gamma", [0, 1, 50])
@pytest.mark.parametrize("rescan", [False, True])
def test_output_is_feasible(gamma, rescan):
    inst = random_euclidean(9, 35, 7)
    tree = nrga_run(inst, NrgaParams(gamma=gamma, seed=2, rescan_all=rescan))
    assert check_feasible(tree) == []
    assert len(tree.edges) == inst.n - 1
    assert len(tree.inter_cluster_edges) == inst.k - 1
    assert sorted(tree.attach_order) == list(range(inst.k))


def test_zero_reward_is_floored():
    inst = build_instance("zero", [[0], [1]], 0, weights=[[0, 0], [0, 0]])
    tree = nrga_run(inst, NrgaParams(gamma=50, seed=1))
    assert total_cost(tree) == 0.0
    assert REWARD_FLOOR > 0


def test_disconnected_clusters():
    w = explicit_matrix(4, {(0, 1): 1, (2, 3): 1})
    inst = build_instance("apart", [[0, 1], [2, 3]], 0, weights=w)
    with pytest.raises(DisconnectedClustersError):
        nrga_run(inst)


def test_state_picks_smallest_id_on_equal_distance(explicit15):
    state = NrgaState.start(explicit15)
    state.queue = {3, 1, 2}
    state.dis.update({1: 7.0, 2: 7.0, 3: 9.0})
    assert state.closest_unattached() == 1


@pytest.mark.parametrize("gamma", [-1, float("inf"), float("nan")])
def test_params_reject_bad_gamma(gamma):
    with pytest.raises(ValidationError):
        NrgaParams(gamma=gamma)


def test_params_reject_seed_outside_u64():
    with pytest.raises(ValueError):
        NrgaParams(seed=2**64)


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("rescan", [False, True])
def test_root_distance_is_tree_distance_to_local_root(seed, rescan):
    inst = random_euclidean(200 + seed, 30, 5)
    tree = nrga_run(inst, NrgaParams(gamma=5, seed=seed, rescan_all=rescan))
    d = tree_distances(tree)
    assert set(tree.root_distance) == set(tree.local_roots)
    for cluster, root in tree.local_roots.items():
        assert tree.root_distance[cluster] == pytest.approx(d[root], rel=1e-9, abs=1e-12)
