"""Cell planning by load-weighted k-medoids clustering."""
from ._kernels import BACKEND
from .core import (Clustering, ConvergenceError, CostModel, SwapCandidate, assign, best_swap,
                   euclidean_dist, evaluate_swaps, run_swap_search, select_initial_medoids)
from .dimensioning import (CellCounts, CellParams, capacity_cell_count, cell_area,
                           coverage_cell_count, initial_k)
from .mapmodel import (MapError, NodeRecord, PlanningMap, StreetRecord, distribute_street_loads,
                       emit_map, load_map, parse_map, total_load)
from .planner import (AlgorithmChoice, ClusterFeasibility, InfeasibleCapacityError, Plan,
                      adjust_method_I, adjust_method_II, check_cluster, plan)
from .synth import SyntheticSpec, generate_map

__version__ = "0.1.0"
