import numpy as np
import pytest

from cellplan.mapmodel import NodeRecord, PlanningMap

ACCEPTANCE_LINES = []


def make_map(coords, loads, area=1.0e6):
    nodes = [NodeRecord(i, float(x), float(y), int(l)) for i, ((x, y), l) in enumerate(zip(coords, loads))]
    return PlanningMap.build(nodes, (), area)


def random_map(rng, n, *, spread=1000.0, max_load=100, integer_coords=False, area=1.0e6):
    if integer_coords:
        coords = rng.integers(0, 6, size=(n, 2)).astype(float)
    else:
        coords = rng.uniform(0, spread, size=(n, 2))
    loads = rng.integers(0, max_load + 1, size=n)
    return make_map(coords, loads, area)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
