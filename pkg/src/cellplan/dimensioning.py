"""Coverage and capacity cell counts, and the starting cluster count."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .mapmodel import PlanningMap, total_load

HEX_AREA_FACTOR = 3.0 * math.sqrt(3.0) / 2.0


def cell_area(cell_range: float) -> float:
    """Area of a regular hexagonal cell with circumradius `cell_range` (m²)."""
    if not (cell_range > 0 and math.isfinite(cell_range)):
        raise ValueError(f"cell_range must be positive, got {cell_range!r}")
    return HEX_AREA_FACTOR * cell_range * cell_range


@dataclass(frozen=True)
class CellParams:
    cell_range: float
    subscribers_per_cell: int

    def __post_init__(self):
        if not (self.cell_range > 0 and math.isfinite(self.cell_range)):
            raise ValueError(f"cell_range must be positive, got {self.cell_range!r}")
        if isinstance(self.subscribers_per_cell, bool) or int(self.subscribers_per_cell) != self.subscribers_per_cell:
            raise ValueError("subscribers_per_cell must be an integer")
        if self.subscribers_per_cell < 1:
            raise ValueError(f"subscribers_per_cell must be >= 1, got {self.subscribers_per_cell}")
        object.__setattr__(self, "subscribers_per_cell", int(self.subscribers_per_cell))

    @property
    def cell_area(self) -> float:
        return cell_area(self.cell_range)

    def to_dict(self) -> dict:
        return {
            "cell_range_m": self.cell_range,
            "subscribers_per_cell": self.subscribers_per_cell,
            "cell_area_m2": self.cell_area,
        }


@dataclass(frozen=True)
class CellCounts:
    by_coverage: int
    by_capacity: int
    initial_k: int


def coverage_cell_count(total_area: float, params: CellParams) -> int:
    if not total_area > 0:
        raise ValueError(f"total_area must be positive, got {total_area!r}")
    return max(1, math.ceil(total_area / params.cell_area))


def capacity_cell_count(total_subscribers: int, params: CellParams) -> int:
    if total_subscribers < 0:
        raise ValueError("total_subscribers must be non-negative")
    # integer ceiling: exact for any subscriber count
    return max(1, -(-int(total_subscribers) // params.subscribers_per_cell))


def initial_k(pmap: PlanningMap, params: CellParams) -> CellCounts:
    """Larger of the coverage and capacity counts, capped at the node count."""
    cov = coverage_cell_count(pmap.area, params)
    cap = capacity_cell_count(total_load(pmap), params)
    return CellCounts(cov, cap, min(max(cov, cap), pmap.n))
