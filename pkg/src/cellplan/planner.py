"""Three-phase base-station planning.

1. dimensioning picks the starting cluster count,
2. the swap search places medoids (base stations),
3. for CWN-PAM, clusters that need more than one cell are repaired, either
   by re-clustering the whole map with one more cluster (method 1) or by
   splitting only the offending cluster in two, recursively (method 2).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .core import Clustering, CostModel, run_swap_search
from .dimensioning import CellCounts, CellParams, initial_k
from .mapmodel import PlanningMap


class InfeasibleCapacityError(ValueError):
    """A single node carries more load than one cell can serve."""

    def __init__(self, node_id: int, load: int, capacity: int):
        self.node_id = node_id
        self.load = load
        self.capacity = capacity
        super().__init__(
            f"infeasible capacity: node id={node_id} has load {load} > {capacity} subscribers per cell"
        )


@dataclass(frozen=True)
class AlgorithmChoice:
    kind: str
    k: int | None = None
    method: int | None = None

    def __post_init__(self):
        if self.kind not in ("pam", "mpam", "cwn-pam"):
            raise ValueError(f"unknown algorithm {self.kind!r}")
        if self.kind == "pam" and (self.k is None or self.k < 1):
            raise ValueError("pam needs an explicit k >= 1")
        if self.kind != "pam" and self.k is not None:
            raise ValueError(f"{self.kind} derives k from dimensioning; do not pass k")
        if self.kind == "cwn-pam" and self.method not in (1, 2):
            raise ValueError("cwn-pam needs method 1 or 2")
        if self.kind != "cwn-pam" and self.method is not None:
            raise ValueError("method applies to cwn-pam only")

    @classmethod
    def pam(cls, k: int) -> "AlgorithmChoice":
        return cls("pam", k=k)

    @classmethod
    def mpam(cls) -> "AlgorithmChoice":
        return cls("mpam")

    @classmethod
    def cwnpam(cls, method: int) -> "AlgorithmChoice":
        return cls("cwn-pam", method=method)

    @property
    def cost_model(self) -> CostModel:
        return CostModel.LOAD_WEIGHTED if self.kind == "cwn-pam" else CostModel.UNWEIGHTED

    @property
    def label(self) -> str:
        if self.kind == "cwn-pam":
            return f"cwn-pam-{self.method}"
        if self.kind == "pam":
            return f"pam-k{self.k}"
        return "mpam"


@dataclass(frozen=True)
class ClusterFeasibility:
    medoid_id: int
    coverage_ok: bool
    capacity_ok: bool
    cells_needed_coverage: int
    cells_needed_capacity: int
    max_dist: float
    load_sum: int

    @property
    def feasible(self) -> bool:
        return self.coverage_ok and self.capacity_ok


@dataclass(frozen=True)
class Cluster:
    medoid_id: int
    bs_x: float
    bs_y: float
    members: tuple[int, ...]
    feasibility: ClusterFeasibility

    @property
    def feasible(self) -> bool:
        return self.feasibility.feasible


@dataclass(frozen=True)
class Plan:
    clusters: tuple[Cluster, ...]
    total_cost: float
    algorithm: AlgorithmChoice
    params: CellParams
    seed: int
    adjustment_rounds: int = 0
    counts: CellCounts | None = field(default=None, compare=False)

    @property
    def num_base_stations(self) -> int:
        return len(self.clusters)

    @property
    def medoids(self) -> tuple[int, ...]:
        return tuple(c.medoid_id for c in self.clusters)

    @property
    def feasible(self) -> bool:
        return all(c.feasible for c in self.clusters)

    def assignment(self) -> dict[int, int]:
        return {m: c.medoid_id for c in self.clusters for m in c.members}

    def to_dict(self, pmap: PlanningMap | None = None) -> dict:
        doc = {
            "algorithm": self.algorithm.kind,
            "seed": self.seed,
            "params": self.params.to_dict(),
            "num_base_stations": self.num_base_stations,
            "total_cost": self.total_cost,
            "adjustment_rounds": self.adjustment_rounds,
            "clusters": [],
        }
        if self.algorithm.method is not None:
            doc["method"] = self.algorithm.method
        if self.algorithm.k is not None:
            doc["k"] = self.algorithm.k
        if self.counts is not None:
            doc["initial_k"] = self.counts.initial_k
        for c in self.clusters:
            entry = {
                "medoid_id": c.medoid_id,
                "bs_x": c.bs_x,
                "bs_y": c.bs_y,
                "members": list(c.members),
                "load_sum": c.feasibility.load_sum,
                "max_dist_m": c.feasibility.max_dist,
                "feasible": c.feasible,
            }
            if pmap is not None:
                pts = [(pmap.node(m).x, pmap.node(m).y) for m in c.members]
                entry["hull"] = [list(p) for p in convex_hull(pts)]
            doc["clusters"].append(entry)
        return doc

    def to_json(self, pmap: PlanningMap | None = None) -> str:
        return json.dumps(self.to_dict(pmap), sort_keys=True, separators=(",", ":")) + "\n"


def convex_hull(points):
    """Counter-clockwise hull vertices (monotone chain); degenerate inputs return their extreme points."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def check_cluster(pmap: PlanningMap, members, medoid: int, params: CellParams) -> ClusterFeasibility:
    """Coverage (farthest member within the cell range) and capacity check of one cluster."""
    idx = np.array([pmap.index_of(m) for m in members], dtype=np.int64)
    if idx.size == 0:
        raise ValueError("cluster has no members")
    if medoid not in set(members):
        raise ValueError(f"medoid {medoid} is not a member of its cluster")
    mi = pmap.index_of(medoid)
    d = _kernels.distance_rows(pmap.xy, _kernels.empty_matrix(), np.array([mi]))[0, idx]
    max_dist = float(d.max())
    load_sum = int(sum(pmap.effective_load[i] for i in idx))

    coverage_ok = max_dist <= params.cell_range
    capacity_ok = load_sum <= params.subscribers_per_cell
    if coverage_ok:
        cells_cov = 1
    else:
        cells_cov = max(2, math.ceil(max_dist / params.cell_range))
    cells_cap = max(1, -(-load_sum // params.subscribers_per_cell))
    return ClusterFeasibility(medoid, coverage_ok, capacity_ok, cells_cov, cells_cap, max_dist, load_sum)


def _cluster(pmap, medoid, members, params) -> Cluster:
    members = tuple(sorted(members))
    node = pmap.node(medoid)
    return Cluster(medoid, node.x, node.y, members, check_cluster(pmap, members, medoid, params))


def clusters_from(pmap: PlanningMap, clustering: Clustering, params: CellParams) -> list[Cluster]:
    return [_cluster(pmap, m, mem, params) for m, mem in sorted(clustering.members().items())]


def clusters_cost(pmap: PlanningMap, clusters, cost_model: CostModel) -> float:
    """Cost of an explicit partition, summed in ascending node id."""
    med_of = np.empty(pmap.n, dtype=np.int64)
    for c in clusters:
        mi = pmap.index_of(c.medoid_id)
        for m in c.members:
            med_of[pmap.index_of(m)] = mi
    dx = pmap.xy[med_of, 0] - pmap.xy[:, 0]
    dy = pmap.xy[med_of, 1] - pmap.xy[:, 1]
    d = np.sqrt(dx * dx + dy * dy)
    return _kernels.sequential_sum(cost_model.weights(pmap) * d)


def _check_node_capacity(pmap: PlanningMap, params: CellParams):
    for node, load in zip(pmap.nodes, pmap.effective_load):
        if load > params.subscribers_per_cell:
            raise InfeasibleCapacityError(node.id, load, params.subscribers_per_cell)


def _search_seed(seed: int, round_index: int) -> int:
    return seed ^ round_index


def adjust_method_I(pmap: PlanningMap, params: CellParams, seed: int, k_current: int,
                    algorithm: AlgorithmChoice | None = None, counts: CellCounts | None = None,
                    **search_kw) -> Plan:
    """Grow k by one over the whole map until every cluster fits in one cell.

    Round r clusters with ``k_current + r`` medoids from a fresh seeded start;
    round 0 is the unrepaired clustering, so a feasible start costs no rounds.
    """
    _check_node_capacity(pmap, params)
    algorithm = algorithm or AlgorithmChoice.cwnpam(1)
    cost_model = CostModel.LOAD_WEIGHTED
    r = 0
    while True:
        k = k_current + r
        clustering = run_swap_search(pmap, k, _search_seed(seed, r), cost_model, **search_kw)
        clusters = clusters_from(pmap, clustering, params)
        if all(c.feasible for c in clusters):
            return Plan(tuple(clusters), clustering.cost, algorithm, params, seed, r, counts)
        if k >= pmap.n:
            bad = next(c for c in clusters if not c.feasible)
            raise InfeasibleCapacityError(bad.medoid_id, bad.feasibility.load_sum, params.subscribers_per_cell)
        r += 1


def _split_until_feasible(pmap, params, seed, cluster, search_kw):
    """Bisect one infeasible cluster until all pieces are feasible. Returns (clusters, splits)."""
    done = []
    splits = 0
    stack = [cluster]
    while stack:
        cur = stack.pop()
        if cur.feasible:
            done.append(cur)
            continue
        if len(cur.members) == 1:
            raise InfeasibleCapacityError(cur.medoid_id, cur.feasibility.load_sum, params.subscribers_per_cell)
        sub = pmap.subset(cur.members)
        halves = run_swap_search(sub, 2, seed, CostModel.LOAD_WEIGHTED, **search_kw)
        splits += 1
        # the higher medoid is pushed first so the lower one is resolved first
        for m, mem in sorted(halves.members().items(), reverse=True):
            stack.append(_cluster(pmap, m, mem, params))
    return done, splits


def adjust_method_II(pmap: PlanningMap, params: CellParams, seed: int, plan: Plan, **search_kw) -> Plan:
    """Split only the infeasible clusters, recursively in two, leaving the rest untouched."""
    out = []
    splits = 0
    for c in sorted(plan.clusters, key=lambda c: c.medoid_id):
        if c.feasible:
            out.append(c)
            continue
        pieces, n_split = _split_until_feasible(pmap, params, seed, c, search_kw)
        out.extend(pieces)
        splits += n_split
    if splits == 0:
        return plan
    out.sort(key=lambda c: c.medoid_id)
    cost = clusters_cost(pmap, out, CostModel.LOAD_WEIGHTED)
    return Plan(tuple(out), cost, plan.algorithm, params, plan.seed,
                plan.adjustment_rounds + splits, plan.counts)


def plan(pmap: PlanningMap, params: CellParams, algorithm: AlgorithmChoice, seed: int = 0,
         **search_kw) -> Plan:
    """Run the full pipeline for one algorithm variant.

    PAM and M-PAM report per-cluster feasibility but do not repair it;
    CWN-PAM raises InfeasibleCapacityError when a single node overloads a cell.
    """
    if seed < 0:
        raise ValueError("seed must be non-negative")
    counts = initial_k(pmap, params)
    if algorithm.kind == "pam":
        if algorithm.k > pmap.n:
            raise ValueError(f"k={algorithm.k} exceeds node count {pmap.n}")
        k = algorithm.k
    else:
        k = counts.initial_k

    if algorithm.kind == "cwn-pam":
        _check_node_capacity(pmap, params)
        if algorithm.method == 1:
            return adjust_method_I(pmap, params, seed, k, algorithm, counts, **search_kw)

    clustering = run_swap_search(pmap, k, seed, algorithm.cost_model, **search_kw)
    raw = Plan(tuple(clusters_from(pmap, clustering, params)), clustering.cost,
               algorithm, params, seed, 0, counts)
    if algorithm.kind == "cwn-pam":
        return adjust_method_II(pmap, params, seed, raw, **search_kw)
    return raw
