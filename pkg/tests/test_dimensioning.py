import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cellplan.dimensioning import (CellParams, capacity_cell_count, cell_area, coverage_cell_count,
                                   initial_k)
from cellplan.mapmodel import NodeRecord, PlanningMap


def test_cell_area_values():
    # 2.598076 * 500^2 worked by hand
    assert cell_area(500) == pytest.approx(649519.05, abs=0.5)
    assert cell_area(1) == pytest.approx(2.598076211, rel=1e-9)
    assert cell_area(1000) == pytest.approx(4 * cell_area(500), rel=1e-12)


@pytest.mark.parametrize("bad", [0, -1, math.inf, math.nan])
def test_cell_area_rejects(bad):
    with pytest.raises(ValueError):
        cell_area(bad)


def test_cell_params_validation():
    with pytest.raises(ValueError):
        CellParams(500, 0)
    with pytest.raises(ValueError):
        CellParams(-1, 10)
    p = CellParams(500, 600)
    assert p.cell_area == cell_area(500)


def test_coverage_counts():
    assert coverage_cell_count(230850, CellParams(500, 600)) == 1
    # 337800 / 162379.76 = 2.08
    assert coverage_cell_count(337800, CellParams(250, 600)) == 3
    p = CellParams(100, 1)
    assert coverage_cell_count(p.cell_area, p) == 1


def test_capacity_counts():
    assert capacity_cell_count(3139, CellParams(500, 600)) == 6
    assert capacity_cell_count(0, CellParams(500, 600)) == 1
    assert capacity_cell_count(600, CellParams(500, 600)) == 1
    assert capacity_cell_count(601, CellParams(500, 600)) == 2


def _map(n, load, area):
    return PlanningMap.build([NodeRecord(i, i, 0, load) for i in range(n)], (), area)


def test_initial_k_takes_max():
    pmap = _map(50, 1, 230850)
    pmap = PlanningMap.build(pmap.nodes, (), 230850, [3139 - 49] + [1] * 49)
    counts = initial_k(pmap, CellParams(500, 600))
    assert (counts.by_coverage, counts.by_capacity, counts.initial_k) == (1, 6, 6)


def test_initial_k_equal_case():
    p = CellParams(250, 100)
    pmap = _map(10, 30, 337800)  # coverage 3, capacity ceil(300/100) = 3
    assert initial_k(pmap, p).initial_k == 3


def test_initial_k_clamped_to_node_count():
    pmap = _map(2, 250, 10.0)  # capacity ceil(500/100) = 5
    counts = initial_k(pmap, CellParams(500, 100))
    assert counts.by_capacity == 5
    assert counts.initial_k == 2


@given(
    area=st.floats(1.0, 1e8),
    load=st.integers(0, 10_000),
    r=st.floats(1.0, 5000.0),
    dr=st.floats(0.0, 1000.0),
    spc=st.integers(1, 2000),
    dspc=st.integers(0, 500),
    n=st.integers(1, 40),
)
def test_initial_k_monotone(area, load, r, dr, spc, dspc, n):
    pmap = PlanningMap.build([NodeRecord(i, i, 0, load if i == 0 else 0) for i in range(n)], (), area)
    bigger = PlanningMap.build(pmap.nodes, (), area * 2, [load * 2] + [0] * (n - 1))
    k = initial_k(pmap, CellParams(r, spc)).initial_k
    assert 1 <= k <= n
    assert initial_k(pmap, CellParams(r + dr, spc)).initial_k <= k
    assert initial_k(pmap, CellParams(r, spc + dspc)).initial_k <= k
    assert initial_k(bigger, CellParams(r, spc)).initial_k >= k


@given(area=st.floats(1e-3, 1e9), r=st.floats(0.5, 1e4))
def test_coverage_ceiling_exact(area, r):
    p = CellParams(r, 10**9)
    c = coverage_cell_count(area, p)
    assert c >= 1
    assert area <= c * p.cell_area * (1 + 1e-12)
    if c > 1:
        assert (c - 1) * p.cell_area < area
