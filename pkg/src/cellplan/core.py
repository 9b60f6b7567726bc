"""Partitioning-around-medoids swap search with unweighted or load-weighted cost.

Cost of a medoid set M over points with weights w::

    cost(M) = sum_i w_i * min_{m in M} dist(i, m)

with w_i = 1 (unweighted) or the node's effective subscriber load.
Points are always assigned by plain distance; loads only weight the cost.
Each iteration evaluates every (medoid, non-medoid) exchange and applies the
single best one, stopping when none lowers the cost by more than
``IMPROVEMENT_RTOL`` of its value.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .mapmodel import NodeRecord, PlanningMap

# below this node count the full distance matrix is precomputed
DEFAULT_MATRIX_THRESHOLD = 2000

# swaps must beat the current cost by more than this fraction of it, and swaps
# within this fraction of the best are treated as tied; keeps roundoff from
# taking plateau moves (e.g. swapping the two members of a uniform pair)
IMPROVEMENT_RTOL = 1e-10


class ConvergenceError(RuntimeError):
    """Swap search exceeded its iteration cap."""


class CostModel(enum.Enum):
    UNWEIGHTED = "unweighted"
    LOAD_WEIGHTED = "load-weighted"

    def weights(self, pmap: PlanningMap) -> np.ndarray:
        if self is CostModel.UNWEIGHTED:
            return np.ones(pmap.n)
        return pmap.weights


@dataclass(frozen=True)
class SwapCandidate:
    medoid_out: int
    candidate_in: int
    resulting_cost: float


@dataclass(frozen=True)
class Clustering:
    medoids: tuple[int, ...]
    assignment: dict[int, int] = field(repr=False)
    cost: float
    iterations: int = 0
    cost_model: CostModel = CostModel.LOAD_WEIGHTED
    cost_history: tuple[float, ...] = field(default=(), repr=False)

    def members(self) -> dict[int, list[int]]:
        groups = {m: [] for m in self.medoids}
        for node_id in sorted(self.assignment):
            groups[self.assignment[node_id]].append(node_id)
        return groups


def euclidean_dist(a: NodeRecord, b: NodeRecord) -> float:
    dx = a.x - b.x
    dy = a.y - b.y
    return math.sqrt(dx * dx + dy * dy)


def select_initial_medoids(pmap: PlanningMap, k: int, seed: int) -> tuple[int, ...]:
    """k distinct node ids drawn uniformly without replacement; reproducible per seed."""
    _check_k(pmap, k)
    rng = np.random.default_rng(seed)
    picked = rng.choice(pmap.n, size=k, replace=False)
    return tuple(sorted(int(pmap.ids[i]) for i in picked))


def _check_k(pmap, k):
    if not 1 <= k <= pmap.n:
        raise ValueError(f"k must be in [1, {pmap.n}], got {k}")


class _Workspace:
    """Distance source and weights for one map, shared across iterations."""

    def __init__(self, pmap: PlanningMap, cost_model: CostModel,
                 matrix_threshold: int = DEFAULT_MATRIX_THRESHOLD):
        self.pmap = pmap
        self.xy = np.ascontiguousarray(pmap.xy)
        self.w = np.ascontiguousarray(cost_model.weights(pmap), dtype=np.float64)
        if pmap.n <= matrix_threshold:
            self.dmat = _kernels.pairwise_distances(self.xy)
        else:
            self.dmat = _kernels.empty_matrix()

    def to_index(self, medoids) -> np.ndarray:
        return np.array([self.pmap.index_of(m) for m in sorted(medoids)], dtype=np.int64)

    def nearest(self, midx):
        return _kernels.nearest_two(self.xy, self.dmat, midx)

    def cost(self, d1) -> float:
        return _kernels.sequential_sum(self.w * d1)

    def candidates(self, midx) -> np.ndarray:
        mask = np.ones(self.pmap.n, dtype=bool)
        mask[midx] = False
        return np.flatnonzero(mask).astype(np.int64)

    def swap_costs(self, midx, nearest, d1, d2):
        cand = self.candidates(midx)
        costs = _kernels.swap_costs(self.xy, self.dmat, self.w, midx, cand, nearest, d1, d2)
        return cand, costs

    def best(self, midx, current_cost, nearest, d1, d2):
        cand, costs = self.swap_costs(midx, nearest, d1, d2)
        if cand.shape[0] == 0:
            return None
        tol = IMPROVEMENT_RTOL * abs(current_cost)
        lowest = float(costs.min())
        if not lowest < current_cost - tol:
            return None
        # first near-minimal entry in row-major order: lowest medoid id,
        # then lowest candidate id
        flat = int(np.argmax(costs <= lowest + tol))
        s, c = divmod(flat, cand.shape[0])
        best_cost = float(costs[s, c])
        ids = self.pmap.ids
        return SwapCandidate(int(ids[midx[s]]), int(ids[cand[c]]), best_cost)

    def assignment(self, nearest) -> dict[int, int]:
        ids = self.pmap.ids
        return {int(ids[i]): int(ids[j]) for i, j in enumerate(nearest)}


def assign(pmap: PlanningMap, medoids, cost_model: CostModel = CostModel.LOAD_WEIGHTED):
    """Map every node to its nearest medoid; return ``(assignment, cost)``.

    Ties go to the lowest medoid id, and each medoid serves itself.
    """
    if not medoids:
        raise ValueError("medoid set must be non-empty")
    ws = _Workspace(pmap, cost_model)
    midx = ws.to_index(medoids)
    nearest, d1, _ = ws.nearest(midx)
    return ws.assignment(nearest), ws.cost(d1)


def evaluate_swaps(pmap: PlanningMap, medoids, cost_model: CostModel = CostModel.LOAD_WEIGHTED,
                   matrix_threshold: int = DEFAULT_MATRIX_THRESHOLD):
    """Cost of every single exchange as ``(medoid_ids, candidate_ids, costs[k, n-k])``."""
    ws = _Workspace(pmap, cost_model, matrix_threshold)
    midx = ws.to_index(medoids)
    nearest, d1, d2 = ws.nearest(midx)
    cand, costs = ws.swap_costs(midx, nearest, d1, d2)
    return pmap.ids[midx].copy(), pmap.ids[cand].copy(), costs


def best_swap(pmap: PlanningMap, clustering: Clustering,
              cost_model: CostModel | None = None) -> SwapCandidate | None:
    """Best improving exchange for `clustering`, or None at a local optimum."""
    cost_model = cost_model or clustering.cost_model
    ws = _Workspace(pmap, cost_model)
    midx = ws.to_index(clustering.medoids)
    nearest, d1, d2 = ws.nearest(midx)
    return ws.best(midx, ws.cost(d1), nearest, d1, d2)


def run_swap_search(pmap: PlanningMap, k: int, seed: int,
                    cost_model: CostModel = CostModel.LOAD_WEIGHTED, *,
                    max_iterations: int | None = None,
                    initial_medoids=None,
                    matrix_threshold: int = DEFAULT_MATRIX_THRESHOLD) -> Clustering:
    """Steepest-descent swap search from seeded random medoids.

    Raises ConvergenceError if more than `max_iterations` swaps (default
    ``10 * n * k``) would be applied.
    """
    _check_k(pmap, k)
    if max_iterations is None:
        max_iterations = 10 * pmap.n * k
    if initial_medoids is None:
        medoids = select_initial_medoids(pmap, k, seed)
    else:
        medoids = tuple(sorted(int(m) for m in initial_medoids))
        if len(set(medoids)) != k:
            raise ValueError("initial_medoids must hold k distinct node ids")

    ws = _Workspace(pmap, cost_model, matrix_threshold)
    midx = ws.to_index(medoids)
    nearest, d1, d2 = ws.nearest(midx)
    cost = ws.cost(d1)
    history = [cost]
    iterations = 0
    while True:
        swap = ws.best(midx, cost, nearest, d1, d2)
        if swap is None:
            break
        if iterations >= max_iterations:
            raise ConvergenceError(
                f"swap search did not converge within {max_iterations} iterations (n={pmap.n}, k={k})"
            )
        out_i = pmap.index_of(swap.medoid_out)
        in_i = pmap.index_of(swap.candidate_in)
        midx = np.sort(np.where(midx == out_i, in_i, midx))
        nearest, d1, d2 = ws.nearest(midx)
        cost = ws.cost(d1)
        iterations += 1
        history.append(cost)

    return Clustering(
        medoids=tuple(int(pmap.ids[i]) for i in midx),
        assignment=ws.assignment(nearest),
        cost=cost,
        iterations=iterations,
        cost_model=cost_model,
        cost_history=tuple(history),
    )
