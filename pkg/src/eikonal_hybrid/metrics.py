"""Ground truth on a refined grid and the discretization / additional error ratios."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classic import fmm_solve
from .grid import Grid, Problem

XPLUS_THRESHOLD = 1e-14


@dataclass
class MetricsReport:
    l_inf: float
    l_1: float
    max_error_ratio: float  # max over X+ of E/e
    avg_error_ratio: float  # mean over X+ of E/e
    ratio_of_max: float  # max E / max e
    M_plus: int
    empty_xplus: bool = False

    def as_row(self) -> dict[str, float]:
        return {
            "l_inf": self.l_inf,
            "l_1": self.l_1,
            "R_max_ratio": self.max_error_ratio,
            "rho": self.avg_error_ratio,
            "R_ratio": self.ratio_of_max,
        }


def refine_problem(problem: Problem, refine: int) -> Problem:
    """Same extent with spacing ``h/refine``; exit node i maps to ``refine*i``."""
    if refine < 1:
        raise ValueError(f"refine factor must be >= 1, got {refine}")
    g = problem.grid
    fine = Grid(refine * (g.m - 1) + 1, refine * (g.n - 1) + 1, g.h / refine, g.origin)
    return Problem(fine, problem.speed, refine * problem.exit_nodes, problem.exit_cost, name=problem.name)


def ground_truth(problem: Problem, refine: int = 4) -> np.ndarray:
    """Fast Marching on the refined grid, restricted back to the original nodes."""
    fine = fmm_solve(refine_problem(problem, refine)).values
    return np.ascontiguousarray(fine[::refine, ::refine])


def error_fields(v_method, v_exact, v_truth, exit_mask=None):
    """Return ``(e, E, xplus)``: discretization error, method error and the X+ mask."""
    v_method, v_exact, v_truth = (np.asarray(v, dtype=float) for v in (v_method, v_exact, v_truth))
    if not v_method.shape == v_exact.shape == v_truth.shape:
        raise ValueError(f"shape mismatch: {v_method.shape}, {v_exact.shape}, {v_truth.shape}")
    e = np.abs(v_exact - v_truth)
    E = np.abs(v_method - v_truth)
    xplus = e > XPLUS_THRESHOLD
    if exit_mask is not None:
        xplus &= ~np.asarray(exit_mask, dtype=bool)
    return e, E, xplus


def error_ratios(e, E, xplus, exit_mask=None) -> MetricsReport:
    e, E, xplus = np.asarray(e, float), np.asarray(E, float), np.asarray(xplus, bool)
    interior = np.ones(E.shape, bool) if exit_mask is None else ~np.asarray(exit_mask, bool)
    l_inf = float(E[interior].max()) if interior.any() else 0.0
    l_1 = float(E[interior].mean()) if interior.any() else 0.0
    M = int(xplus.sum())
    if M == 0:
        return MetricsReport(l_inf, l_1, 1.0, 1.0, 1.0, 0, empty_xplus=True)
    r = E[xplus] / e[xplus]
    return MetricsReport(l_inf, l_1, float(r.max()), float(r.mean()), float(E[xplus].max() / e[xplus].max()), M)


def evaluate(v_method, v_exact, v_truth, exit_mask=None) -> MetricsReport:
    e, E, xplus = error_fields(v_method, v_exact, v_truth, exit_mask)
    return error_ratios(e, E, xplus, exit_mask)
