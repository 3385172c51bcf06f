"""Eikonal solvers on uniform 2-D grids: marching, sweeping and two-scale cell methods."""
from .cells import CellDecomposition, build_cells, fhcm_solve, hcm_solve, monotonicity_flags, scan_cell_boundary
from .classic import fmm_solve, fsm_solve, lsm_solve, sweep_order
from .errors import ConfigurationError, ContractViolation, DomainError
from .fmsm import build_coarse_problem, fmsm_solve, sweep_directions
from .grid import Grid, Problem, SolverOutput, build_problem, snap_point_to_node
from .heap import IndexedMinHeap
from .local_update import Direction, NeighborValues, directional_update, node_update, quadrant_update
from .metrics import MetricsReport, error_fields, error_ratios, evaluate, ground_truth
from .problems import PROBLEM_NAMES, speed_by_name, speed_checkerboard, speed_comb_maze, speed_constant, speed_sinusoid

SOLVERS = {
    "fmm": fmm_solve,
    "fsm": fsm_solve,
    "lsm": lsm_solve,
    "hcm": hcm_solve,
    "fhcm": fhcm_solve,
    "fmsm": fmsm_solve,
}

__version__ = "0.1.0"

__all__ = [
    "CellDecomposition", "ConfigurationError", "ContractViolation", "Direction", "DomainError",
    "Grid", "IndexedMinHeap", "MetricsReport", "NeighborValues", "PROBLEM_NAMES", "Problem",
    "SOLVERS", "SolverOutput", "build_cells", "build_coarse_problem", "build_problem",
    "directional_update", "error_fields", "error_ratios", "evaluate", "fhcm_solve", "fmm_solve",
    "fmsm_solve", "fsm_solve", "ground_truth", "hcm_solve", "lsm_solve", "monotonicity_flags",
    "node_update", "quadrant_update", "scan_cell_boundary", "snap_point_to_node", "speed_by_name",
    "speed_checkerboard", "speed_comb_maze", "speed_constant", "speed_sinusoid", "sweep_directions",
    "sweep_order",
]
