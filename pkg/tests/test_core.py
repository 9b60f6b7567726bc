import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cellplan.core import (Clustering, ConvergenceError, CostModel, SwapCandidate, assign,
                           best_swap, euclidean_dist, run_swap_search, select_initial_medoids)
from cellplan.mapmodel import NodeRecord

from conftest import make_map, random_map
from oracles import brute_assign, brute_best_swap, brute_cost

W, U = CostModel.LOAD_WEIGHTED, CostModel.UNWEIGHTED


def test_euclidean():
    assert euclidean_dist(NodeRecord(0, 0, 0, 0), NodeRecord(1, 3, 4, 0)) == 5.0
    assert euclidean_dist(NodeRecord(0, 1, 1, 0), NodeRecord(1, 4, 5, 0)) == 5.0
    p = NodeRecord(0, 7.25, -3.5, 0)
    assert euclidean_dist(p, p) == 0.0


def test_select_initial_medoids():
    m10 = random_map(np.random.default_rng(0), 10)
    assert select_initial_medoids(m10, 10, 3) == tuple(range(10))
    assert select_initial_medoids(m10, 4, 42) == select_initial_medoids(m10, 4, 42)
    assert len(set(select_initial_medoids(m10, 4, 42))) == 4
    single = make_map([(5, 5)], [1])
    assert select_initial_medoids(single, 1, 0) == (0,)
    for bad in (0, 11):
        with pytest.raises(ValueError):
            select_initial_medoids(m10, bad, 0)


def test_assign_hand_costs():
    m = make_map([(0, 0), (3, 4)], [1, 10])
    assignment, cost = assign(m, [0], W)
    assert assignment == {0: 0, 1: 0}
    assert cost == 50.0
    assert assign(m, [0], U)[1] == 5.0


def test_assign_tie_goes_to_lowest_medoid_id():
    nodes = [NodeRecord(2, -1, 0, 1), NodeRecord(5, 0, 0, 1), NodeRecord(7, 1, 0, 1)]
    from cellplan.mapmodel import PlanningMap
    m = PlanningMap.build(nodes, (), 1.0)
    assignment, _ = assign(m, [7, 2], U)
    assert assignment[5] == 2


def test_coincident_medoids_serve_themselves():
    m = make_map([(0, 0), (0, 0), (5, 0)], [1, 1, 1])
    assignment, cost = assign(m, [0, 1], U)
    assert assignment == {0: 0, 1: 1, 2: 0}
    assert cost == 5.0


def test_best_swap_collinear():
    m = make_map([(0, 0), (1, 0), (2, 0)], [1, 1, 1])
    cl = Clustering((0,), {0: 0, 1: 0, 2: 0}, 3.0, cost_model=U)
    assert best_swap(m, cl) == SwapCandidate(0, 1, 2.0)
    at_opt = Clustering((1,), {0: 1, 1: 1, 2: 1}, 2.0, cost_model=U)
    assert best_swap(m, at_opt) is None


@pytest.mark.parametrize("model,medoid,cost", [(W, 2, 3.0), (U, 1, 2.0)])
def test_weighted_shift(model, medoid, cost):
    m = make_map([(0, 0), (1, 0), (2, 0)], [1, 1, 10])
    # enumeration of single medoids: weighted 0:21 1:11 2:3, unweighted 0:3 1:2 2:3
    enum = {j: brute_cost(m.xy.tolist(), model.weights(m).tolist(), [j]) for j in range(3)}
    assert enum == ({0: 21.0, 1: 11.0, 2: 3.0} if model is W else {0: 3.0, 1: 2.0, 2: 3.0})
    for seed in range(6):
        res = run_swap_search(m, 1, seed, model)
        assert res.medoids == (medoid,)
        assert res.cost == cost


def test_k_equals_n():
    m = random_map(np.random.default_rng(3), 7)
    res = run_swap_search(m, 7, 0, W)
    assert res.medoids == tuple(range(7))
    assert res.cost == 0.0
    assert res.iterations == 0


def test_iteration_cap():
    m = make_map([(0, 0), (1, 0), (2, 0), (3, 0), (10, 0)], [1] * 5)
    with pytest.raises(ConvergenceError):
        run_swap_search(m, 1, 0, U, max_iterations=0, initial_medoids=[4])


@st.composite
def instances(draw):
    n = draw(st.integers(1, 9))
    k = draw(st.integers(1, min(3, n)))
    grid = draw(st.booleans())
    if grid:
        coord = st.integers(0, 4).map(float)
    else:
        coord = st.floats(-100, 100, allow_nan=False)
    coords = [(draw(coord), draw(coord)) for _ in range(n)]
    loads = [draw(st.integers(0, 20)) for _ in range(n)]
    medoids = draw(st.lists(st.integers(0, n - 1), min_size=k, max_size=k, unique=True))
    return make_map(coords, loads), sorted(medoids), draw(st.sampled_from([U, W]))


@given(instances())
@settings(max_examples=200, deadline=None)
def test_assign_and_swap_match_brute_force(inst):
    m, medoids, model = inst
    pts, w = m.xy.tolist(), model.weights(m).tolist()
    assignment, cost = assign(m, medoids, model)
    assert cost == pytest.approx(brute_cost(pts, w, medoids), rel=1e-9, abs=1e-12)
    assert [assignment[i] for i in range(m.n)] == brute_assign(pts, medoids)

    cl = Clustering(tuple(medoids), assignment, cost, cost_model=model)
    got = best_swap(m, cl)
    want = brute_best_swap(pts, w, medoids)
    if want is None:
        assert got is None
    else:
        assert (got.medoid_out, got.candidate_in) == want[:2]
        assert got.resulting_cost == pytest.approx(want[2], rel=1e-9, abs=1e-12)
        _, recomputed = assign(m, sorted(set(medoids) - {got.medoid_out} | {got.candidate_in}), model)
        assert got.resulting_cost == pytest.approx(recomputed, rel=1e-9, abs=1e-12)


@given(st.integers(0, 2**32 - 1), st.integers(2, 40), st.integers(1, 5), st.sampled_from([U, W]))
@settings(max_examples=60, deadline=None)
def test_search_descends_to_local_optimum(seed, n, k, model):
    rng = np.random.default_rng(seed)
    m = random_map(rng, n)
    k = min(k, n)
    res = run_swap_search(m, k, seed, model)
    hist = res.cost_history
    assert all(b < a for a, b in zip(hist, hist[1:]))
    assert len(hist) == res.iterations + 1
    assert res.cost == hist[-1]
    assert best_swap(m, res) is None
    # medoids serve themselves, everyone else goes to a closest medoid
    for node, med in res.assignment.items():
        if node in res.medoids:
            assert med == node
        else:
            d = {mm: euclidean_dist(m.node(node), m.node(mm)) for mm in res.medoids}
            assert d[med] == min(d.values())
            assert med == min(mm for mm in res.medoids if d[mm] == d[med])


@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 10, 1000]))
@settings(max_examples=40, deadline=None)
def test_positive_scaling_keeps_decisions(seed, c):
    rng = np.random.default_rng(seed)
    m = random_map(rng, int(rng.integers(3, 30)), max_load=50)
    scaled = make_map(m.xy, [c * l for l in m.effective_load])
    k = int(rng.integers(1, min(4, m.n) + 1))
    a = run_swap_search(m, k, seed, W)
    b = run_swap_search(scaled, k, seed, W)
    assert a.medoids == b.medoids
    assert a.assignment == b.assignment
    assert a.iterations == b.iterations
    assert b.cost == pytest.approx(c * a.cost, rel=1e-9)


@given(st.integers(0, 2**32 - 1), st.integers(1, 50))
@settings(max_examples=40, deadline=None)
def test_uniform_loads_match_unweighted(seed, load):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 30))
    m = make_map(rng.uniform(0, 500, size=(n, 2)), [load] * n)
    k = int(rng.integers(1, min(4, n) + 1))
    a = run_swap_search(m, k, seed, W)
    b = run_swap_search(m, k, seed, U)
    assert a.medoids == b.medoids
    assert a.assignment == b.assignment


def test_on_demand_distances_match_matrix():
    m = random_map(np.random.default_rng(9), 60)
    a = run_swap_search(m, 4, 1, W)
    b = run_swap_search(m, 4, 1, W, matrix_threshold=10)
    assert a.medoids == b.medoids
    assert a.cost == b.cost
    assert a.cost_history == b.cost_history


def test_uniform_pair_is_a_plateau():
    # either member of an equal-load pair is an equally good medoid
    m = make_map([(0.1, 0.3), (7.7, 2.9)], [3, 3])
    for model in (U, W):
        for start in (0, 1):
            res = run_swap_search(m, 1, 0, model, initial_medoids=[start])
            assert res.medoids == (start,)
            assert res.iterations == 0


def test_roundoff_plateau_regression():
    # found by hypothesis: unweighted search once took a 1-ulp "improvement"
    rng = np.random.default_rng(104)
    n = int(rng.integers(2, 30))
    m = make_map(rng.uniform(0, 500, size=(n, 2)), [3] * n)
    k = int(rng.integers(1, min(4, n) + 1))
    a = run_swap_search(m, k, 104, W)
    b = run_swap_search(m, k, 104, U)
    assert a.medoids == b.medoids
    assert a.cost == pytest.approx(3 * b.cost, rel=1e-12)
