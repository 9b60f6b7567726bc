"""Synthetic maps with prescribed node count, area and subscriber total."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .mapmodel import NodeRecord, PlanningMap

HOMOGENEOUS = "homogeneous"
HETEROGENEOUS = "heterogeneous"


@dataclass(frozen=True)
class SyntheticSpec:
    node_count: int
    target_total_subscribers: int
    target_area_m2: float
    density_mode: str = HOMOGENEOUS
    hotspot_count: int | None = None
    hotspot_share: float = 0.6
    seed: int = 0

    def __post_init__(self):
        if self.node_count < 1:
            raise ValueError("node_count must be >= 1")
        if self.target_total_subscribers < 0:
            raise ValueError("target_total_subscribers must be >= 0")
        if not self.target_area_m2 > 0:
            raise ValueError("target_area_m2 must be positive")
        if self.density_mode not in (HOMOGENEOUS, HETEROGENEOUS):
            raise ValueError(f"unknown density_mode {self.density_mode!r}")
        if self.density_mode == HETEROGENEOUS:
            if not 0.0 < self.hotspot_share < 1.0:
                raise ValueError("hotspot_share must lie in (0, 1)")
            if self.node_count < 2:
                raise ValueError("heterogeneous maps need at least 2 nodes")
            hc = self.resolved_hotspot_count
            if not 1 <= hc < self.node_count:
                raise ValueError(f"hotspot_count must be in [1, {self.node_count - 1}], got {hc}")

    @property
    def resolved_hotspot_count(self) -> int:
        if self.hotspot_count is not None:
            return self.hotspot_count
        return min(self.node_count - 1, max(1, round(0.1 * self.node_count)))


def largest_remainder(quotas: np.ndarray, total: int) -> np.ndarray:
    """Round non-negative `quotas` to integers summing to `total`.

    Leftover units go to the largest fractional parts, lowest index first on ties.
    """
    base = np.floor(quotas).astype(np.int64)
    short = int(total - base.sum())
    if short:
        frac = quotas - base
        order = np.argsort(-frac, kind="stable")
        base[order[:short]] += 1
    return base


def generate_map(spec: SyntheticSpec) -> PlanningMap:
    """Nodes uniform on a square of the target area; loads hit the target total exactly.

    Coordinates are drawn before anything else, so two specs differing only
    in loads or density mode share the same node layout.
    """
    rng = np.random.default_rng(spec.seed)
    n = spec.node_count
    side = math.sqrt(spec.target_area_m2)
    xy = np.round(rng.uniform(0.0, side, size=(n, 2)), 2)

    total = spec.target_total_subscribers
    if spec.density_mode == HOMOGENEOUS:
        quotas = np.full(n, total / n)
    else:
        hot = np.zeros(n, dtype=bool)
        hot[rng.choice(n, size=spec.resolved_hotspot_count, replace=False)] = True
        raw = rng.uniform(0.8, 1.2, size=n)
        raw[hot] *= spec.hotspot_share / raw[hot].sum()
        raw[~hot] *= (1.0 - spec.hotspot_share) / raw[~hot].sum()
        quotas = total * raw
    loads = largest_remainder(quotas, total)

    nodes = [NodeRecord(i, float(xy[i, 0]), float(xy[i, 1]), int(loads[i])) for i in range(n)]
    return PlanningMap.build(nodes, (), float(spec.target_area_m2))
