"""Fast Marching-Sweeping: coarse-grid marching orders the cells, each cell is swept once."""
from __future__ import annotations

import numpy as np
from numba import njit

from .cells import CellDecomposition
from .classic import _sweep_bounds, fmm_solve
from .errors import ConfigurationError
from .grid import Grid, Problem, SolverOutput
from .local_update import Direction, _directional_update, _node_update

_SW, _NW, _NE, _SE = int(Direction.SW), int(Direction.NW), int(Direction.NE), int(Direction.SE)


def build_coarse_problem(problem: Problem, cells: CellDecomposition) -> Problem:
    """One coarse node per cell centre; cells holding exit nodes become coarse exits.

    A single-node exit set keeps its cost. Otherwise each exit cell gets
    ``min(q + |centre - node| / F(centre))`` over its exit nodes.
    """
    if cells.cells_x < 2 or cells.cells_y < 2:
        raise ConfigurationError("FMSM needs at least 2x2 cells")
    CX, CY = cells.centers()
    grid = Grid(cells.cells_x, cells.cells_y, cells.h_c, origin=(float(CX[0, 0]), float(CY[0, 0])))
    nodes = problem.exit_nodes
    owner = cells.node_cell[nodes[:, 0], nodes[:, 1]]
    exit_cells = np.unique(owner)
    if len(nodes) == 1:
        costs = problem.exit_cost.copy()
    else:
        g = problem.grid
        costs = np.empty(len(exit_cells))
        for t, c in enumerate(exit_cells):
            cx, cy = cells.coords(c)
            px, py = CX[cx, cy], CY[cx, cy]
            sel = owner == c
            xs = g.origin[0] + g.h * nodes[sel, 0]
            ys = g.origin[1] + g.h * nodes[sel, 1]
            f = float(np.asarray(problem.speed(px, py)))
            costs[t] = np.min(problem.exit_cost[sel] + np.hypot(xs - px, ys - py) / f)
    coarse_nodes = np.array([cells.coords(c) for c in exit_cells])
    return Problem(grid, problem.speed, coarse_nodes, costs, name=f"{problem.name}:coarse")


def sweep_directions(accepted_sides: tuple[bool, bool, bool, bool]) -> list[Direction]:
    """Upwind sweeps for a cell from which of its (W, E, S, N) neighbors came first.

    Every earlier-accepted side contributes the two directions entering from it.
    """
    return [Direction(d) for d in range(4) if _pick_directions(*accepted_sides)[d]]


@njit(cache=True)
def _pick_directions(w, e, s, n):
    use = np.zeros(4, dtype=np.bool_)
    if w:
        use[_SW] = use[_NW] = True
    if e:
        use[_NE] = use[_SE] = True
    if s:
        use[_SW] = use[_SE] = True
    if n:
        use[_NW] = use[_NE] = True
    return use


@njit(cache=True)
def _fsm_block(V, F, is_exit, h, i0, i1, j0, j1):
    s = 0
    updates = 0
    while True:
        d = s % 4
        a0, a1, sa = _sweep_bounds(d <= 1, i0, i1)
        b0, b1, sb = _sweep_bounds(d == 0 or d == 3, j0, j1)
        changed = False
        for i in range(a0, a1, sa):
            for j in range(b0, b1, sb):
                if is_exit[i, j]:
                    continue
                cand = _node_update(V, F, i, j, h)
                updates += 1
                if cand < V[i, j]:
                    V[i, j] = cand
                    changed = True
        s += 1
        if not changed:
            break
    return s, updates


@njit(cache=True)
def _fmsm_fine(V, F, is_exit, h, x_edges, y_edges, order, is_exit_cell):
    ncx = len(x_edges) - 1
    ncy = len(y_edges) - 1
    J = ncx * ncy
    rank = np.full(J, J, dtype=np.int64)
    for t in range(J):
        rank[order[t]] = t
    sweeps = np.zeros(J, dtype=np.int64)
    updates = 0
    for t in range(J):
        c = order[t]
        cx = c // ncy
        cy = c % ncy
        i0 = x_edges[cx]
        i1 = x_edges[cx + 1]
        j0 = y_edges[cy]
        j1 = y_edges[cy + 1]
        w = cx > 0 and rank[c - ncy] < t
        e = cx < ncx - 1 and rank[c + ncy] < t
        s = cy > 0 and rank[c - 1] < t
        n = cy < ncy - 1 and rank[c + 1] < t
        if is_exit_cell[c] or not (w or e or s or n):
            k, u = _fsm_block(V, F, is_exit, h, i0, i1, j0, j1)
            sweeps[c] = k
            updates += u
            continue
        use = _pick_directions(w, e, s, n)
        for d in range(4):
            if not use[d]:
                continue
            a0, a1, sa = _sweep_bounds(d <= 1, i0, i1)
            b0, b1, sb = _sweep_bounds(d == 0 or d == 3, j0, j1)
            for i in range(a0, a1, sa):
                for j in range(b0, b1, sb):
                    if is_exit[i, j]:
                        continue
                    cand = _directional_update(V, F, i, j, h, d)
                    updates += 1
                    if cand < V[i, j]:
                        V[i, j] = cand
            sweeps[c] += 1
    return sweeps, updates


def fmsm_solve(problem: Problem, cells: CellDecomposition) -> SolverOutput:
    """Fast Marching-Sweeping Method.

    Cells are visited once, in the acceptance order of Fast Marching on the
    coarse grid of cell centres (coarse exits first, by cost). Exit cells are
    swept to convergence; every other cell gets one directional sweep per
    upwind direction implied by its earlier-accepted neighbors.
    """
    if cells.grid != problem.grid:
        raise ConfigurationError("cell decomposition was built for a different grid")
    coarse = build_coarse_problem(problem, cells)
    coarse_out = fmm_solve(coarse)
    exit_idx = coarse.exit_nodes[:, 0] * cells.cells_y + coarse.exit_nodes[:, 1]
    first = exit_idx[np.lexsort((exit_idx, coarse.exit_cost))]
    order = np.concatenate([first, coarse_out.extras["order"]]).astype(np.int64)
    if len(order) != cells.J:
        raise RuntimeError("coarse marching did not reach every cell")
    is_exit_cell = np.zeros(cells.J, dtype=np.bool_)
    is_exit_cell[exit_idx] = True

    V = problem.initial_values()
    sweeps, updates = _fmsm_fine(
        V, problem.speed_values(), problem.exit_mask, problem.grid.h,
        cells.x_edges, cells.y_edges, order, is_exit_cell,
    )
    return SolverOutput(
        V,
        sweeps=int(sweeps.sum()),
        node_updates=int(updates),
        heap_removals=coarse_out.heap_removals,
        extras={
            "AvS": sweeps.sum() / cells.J,
            "cell_order": order,
            "cell_sweeps": sweeps,
            "coarse_values": coarse_out.values,
        },
    )
