"""Cell decompositions and the heap-cell solvers (HCM and FHCM)."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numba import njit

from .classic import _initial_unlocked, _lsm_sweep, _sweep_bounds
from .errors import ConfigurationError
from .grid import Grid, Problem, SolverOutput
from .heap import heap_decrease, heap_pop, heap_push
from .local_update import Direction, _node_update

# Side of a neighbor cell relative to the processed cell.
WEST, EAST, SOUTH, NORTH = 0, 1, 2, 3
SIDE_NAMES = ("west", "east", "south", "north")
_OPPOSITE = (EAST, WEST, NORTH, SOUTH)

# Sweep directions raised on a neighbor lying on side s of the processed cell,
# as (when border values rise along the scan order, when they fall).
# Vertical borders are scanned north to south, horizontal ones west to east.
_ENTRY = np.array(
    [
        [Direction.NE, Direction.SE],  # neighbor to the west: info arrives from its east
        [Direction.NW, Direction.SW],
        [Direction.NW, Direction.NE],  # neighbor to the south
        [Direction.SW, Direction.SE],
    ],
    dtype=np.int64,
)


@dataclass(frozen=True, eq=False)
class CellDecomposition:
    """Rectangular partition of a grid into ``cells_x * cells_y`` cells.

    Cell ``(cx, cy)`` has linear index ``cx * cells_y + cy`` and owns nodes
    ``x_edges[cx] <= i < x_edges[cx+1]``, ``y_edges[cy] <= j < y_edges[cy+1]``.
    """

    grid: Grid
    cells_x: int
    cells_y: int
    x_edges: np.ndarray = field(repr=False)
    y_edges: np.ndarray = field(repr=False)

    @property
    def J(self) -> int:
        return self.cells_x * self.cells_y

    @property
    def h_c(self) -> float:
        """Centre-to-centre spacing of the first two cells along x (exact for equal cells)."""
        w = np.diff(self.x_edges)
        if len(w) == 1:
            return float(w[0] * self.grid.h)
        return float(0.5 * (w[0] + w[1]) * self.grid.h)

    def index(self, cx: int, cy: int) -> int:
        return cx * self.cells_y + cy

    def coords(self, c: int) -> tuple[int, int]:
        return divmod(c, self.cells_y)

    def node_range(self, c: int) -> tuple[int, int, int, int]:
        """``(i0, i1, j0, j1)``, half-open node index bounds of cell ``c``."""
        cx, cy = self.coords(c)
        return (int(self.x_edges[cx]), int(self.x_edges[cx + 1]), int(self.y_edges[cy]), int(self.y_edges[cy + 1]))

    def neighbor(self, c: int, side: int) -> int:
        """Index of the neighbor on ``side`` (WEST/EAST/SOUTH/NORTH), or -1."""
        cx, cy = self.coords(c)
        dx, dy = ((-1, 0), (1, 0), (0, -1), (0, 1))[side]
        cx, cy = cx + dx, cy + dy
        if 0 <= cx < self.cells_x and 0 <= cy < self.cells_y:
            return self.index(cx, cy)
        return -1

    def neighbors(self, c: int) -> list[int]:
        return [k for s in range(4) if (k := self.neighbor(c, s)) >= 0]

    def halo(self, c: int) -> list[tuple[int, int]]:
        """Nodes outside ``c`` with a stencil neighbor inside it."""
        i0, i1, j0, j1 = self.node_range(c)
        m, n = self.grid.shape
        out = []
        if i0 > 0:
            out += [(i0 - 1, j) for j in range(j0, j1)]
        if i1 < m:
            out += [(i1, j) for j in range(j0, j1)]
        if j0 > 0:
            out += [(i, j0 - 1) for i in range(i0, i1)]
        if j1 < n:
            out += [(i, j1) for i in range(i0, i1)]
        return out

    @cached_property
    def node_cell(self) -> np.ndarray:
        cx = np.searchsorted(self.x_edges, np.arange(self.grid.m), side="right") - 1
        cy = np.searchsorted(self.y_edges, np.arange(self.grid.n), side="right") - 1
        return cx[:, None] * self.cells_y + cy[None, :]

    def centers(self) -> tuple[np.ndarray, np.ndarray]:
        """Cell-centre coordinates, each of shape ``(cells_x, cells_y)``."""
        g = self.grid
        cx = g.origin[0] + g.h * 0.5 * (self.x_edges[:-1] + self.x_edges[1:] - 1)
        cy = g.origin[1] + g.h * 0.5 * (self.y_edges[:-1] + self.y_edges[1:] - 1)
        return np.meshgrid(cx, cy, indexing="ij")

    def exit_cells(self, problem: Problem) -> np.ndarray:
        cells = self.node_cell[problem.exit_nodes[:, 0], problem.exit_nodes[:, 1]]
        return np.unique(cells)


def _edges(count: int, cells: int) -> np.ndarray:
    base = count // cells
    edges = np.arange(cells + 1, dtype=np.int64) * base
    edges[-1] = count
    return edges


def build_cells(grid: Grid, cells_x: int, cells_y: int | None = None) -> CellDecomposition:
    """Split ``grid`` into equal cells, the remainder going to the last row/column."""
    cells_y = cells_x if cells_y is None else cells_y
    if cells_x < 1 or cells_y < 1:
        raise ConfigurationError(f"cell counts must be positive, got {cells_x}x{cells_y}")
    if cells_x > grid.m or cells_y > grid.n:
        raise ConfigurationError(f"{cells_x}x{cells_y} cells do not fit a {grid.m}x{grid.n} grid")
    return CellDecomposition(grid, cells_x, cells_y, _edges(grid.m, cells_x), _edges(grid.n, cells_y))


def cell_value_candidate(v_boundary: float, f_probe: float, h: float, h_c: float) -> float:
    """Cell-value estimate: boundary value plus travel time over half a cell step."""
    if v_boundary == np.inf:
        return np.inf
    return v_boundary + 0.5 * (h + h_c) / f_probe


def probe_costs(problem: Problem, cells: CellDecomposition) -> np.ndarray:
    """Per-node travel cost into the neighbor cell on each side, shape ``(4, m, n)``.

    Entry ``[s, i, j]`` is ``d / F(y)`` with ``d = (h + h_c)/2`` for the pair
    (cell of node, neighbor on side s) and ``y`` the node shifted by ``d``
    towards that neighbor, clamped to the grid's closed extent.
    """
    g = problem.grid
    X, Y = g.coordinates()
    xmin, xmax, ymin, ymax = g.extent
    wx = np.diff(cells.x_edges).astype(float)
    wy = np.diff(cells.y_edges).astype(float)
    cx = np.searchsorted(cells.x_edges, np.arange(g.m), side="right") - 1
    cy = np.searchsorted(cells.y_edges, np.arange(g.n), side="right") - 1
    out = np.ones((4, g.m, g.n))
    for side in range(4):
        if side in (WEST, EAST):
            w = wx
            idx = cx
            other = idx + (1 if side == EAST else -1)
        else:
            w = wy
            idx = cy
            other = idx + (1 if side == NORTH else -1)
        valid = (other >= 0) & (other < len(w))
        hc = 0.5 * (w[idx] + w[np.clip(other, 0, len(w) - 1)]) * g.h
        d = np.where(valid, 0.5 * (g.h + hc), 0.0)
        sign = -1.0 if side in (WEST, SOUTH) else 1.0
        if side in (WEST, EAST):
            d2 = d[:, None] * np.ones((1, g.n))
            px, py = np.clip(X + sign * d2, xmin, xmax), Y
        else:
            d2 = np.ones((g.m, 1)) * d[None, :]
            px, py = X, np.clip(Y + sign * d2, ymin, ymax)
        F = np.broadcast_to(np.asarray(problem.speed(px, py), dtype=float), X.shape)
        out[side] = d2 / F
    return out


@njit(cache=True)
def _border(side, i0, i1, j0, j1):
    """Start node, step and length of the border of a cell facing ``side``,
    in scan order (north to south for vertical borders, west to east otherwise)."""
    if side == WEST:
        return i0, j1 - 1, 0, -1, j1 - j0, -1, 0
    if side == EAST:
        return i1 - 1, j1 - 1, 0, -1, j1 - j0, 1, 0
    if side == SOUTH:
        return i0, j0, 1, 0, i1 - i0, 0, -1
    return i0, j1 - 1, 1, 0, i1 - i0, 0, 1


@njit(cache=True)
def _scan_side(V, snap, si0, sj0, is_exit, probe, side, first, i0, i1, j0, j1):
    """Scan the border of the processed cell facing ``side``.

    ``snap`` holds the cell's values before processing (block origin
    ``(si0, sj0)``). Returns ``(should_add, candidate, rising, falling)`` where
    the last two say whether the border values are monotone along scan order.
    """
    a, b, da, db, count, oa, ob = _border(side, i0, i1, j0, j1)
    should = False
    vmax = -np.inf
    amax = a
    bmax = b
    rising = True
    falling = True
    prev = 0.0
    for t in range(count):
        i = a + t * da
        j = b + t * db
        vi = V[i, j]
        vj = V[i + oa, j + ob]
        if not should and vi < vj and not is_exit[i + oa, j + ob]:
            if vi < snap[i - si0, j - sj0] or (first and is_exit[i, j]):
                should = True
        if vi > vmax:
            vmax = vi
            amax = i
            bmax = j
        if t > 0:
            if vi < prev:
                rising = False
            if vi > prev:
                falling = False
        prev = vi
    cand = np.inf
    if vmax < np.inf:
        cand = vmax + probe[side, amax, bmax]
    return should, cand, rising, falling


@njit(cache=True)
def _full_sweep(V, F, is_exit, h, d, i_lo, i_hi, j_lo, j_hi):
    i0, i1, si = _sweep_bounds(d <= 1, i_lo, i_hi)
    j0, j1, sj = _sweep_bounds(d == 0 or d == 3, j_lo, j_hi)
    changed = False
    updates = 0
    for i in range(i0, i1, si):
        for j in range(j0, j1, sj):
            if is_exit[i, j]:
                continue
            cand = _node_update(V, F, i, j, h)
            updates += 1
            if cand < V[i, j]:
                V[i, j] = cand
                changed = True
    return changed, updates


@njit(cache=True)
def _heap_cells(V, F, is_exit, probe, h, x_edges, y_edges, exit_cells, exit_cell_value, fast, max_removals):
    m, n = V.shape
    ncx = len(x_edges) - 1
    ncy = len(y_edges) - 1
    J = ncx * ncy
    Vc = np.full(J, np.inf)
    heap = np.empty(J, dtype=np.int64)
    pos = np.full(J, -1, dtype=np.int64)
    flags = np.zeros((J, 4), dtype=np.bool_)
    processed = np.zeros(J, dtype=np.bool_)
    removals = np.zeros(J, dtype=np.int64)
    sweeps = np.zeros(J, dtype=np.int64)
    size = 0
    updates = 0
    mon_checks = 0
    mon_hits = 0
    total_removals = 0
    fhcm_order = np.array([2, 1, 3, 0])  # NE, NW, SE, SW

    for t in range(len(exit_cells)):
        c = exit_cells[t]
        Vc[c] = exit_cell_value[t]
        if fast:
            for d in range(4):
                flags[c, d] = True
        size = heap_push(heap, pos, Vc, size, c)

    unlocked = _initial_unlocked(V, is_exit)
    order = np.zeros(4, dtype=np.int64)

    while size > 0 and total_removals < max_removals:
        c, size = heap_pop(heap, pos, Vc, size)
        total_removals += 1
        removals[c] += 1
        cx = c // ncy
        cy = c % ncy
        i0 = x_edges[cx]
        i1 = x_edges[cx + 1]
        j0 = y_edges[cy]
        j1 = y_edges[cy + 1]
        snap = V[i0:i1, j0:j1].copy()

        if fast:
            for t in range(4):
                d = fhcm_order[t]
                if flags[c, d]:
                    _, u = _full_sweep(V, F, is_exit, h, d, i0, i1, j0, j1)
                    updates += u
                    sweeps[c] += 1
        else:
            k = 0
            for d in range(4):
                if flags[c, d]:
                    order[k] = d
                    k += 1
            for d in range(4):
                if not flags[c, d]:
                    order[k] = d
                    k += 1
            s = 0
            while True:
                d = order[s] if s < 4 else s % 4
                changed, u = _lsm_sweep(V, F, is_exit, unlocked, h, d, i0, i1, j0, j1)
                updates += u
                s += 1
                if not changed:
                    break
            sweeps[c] += s
        for d in range(4):
            flags[c, d] = False
        first = not processed[c]
        processed[c] = True

        for side in range(4):
            if side == WEST:
                if cx == 0:
                    continue
                k = c - ncy
            elif side == EAST:
                if cx == ncx - 1:
                    continue
                k = c + ncy
            elif side == SOUTH:
                if cy == 0:
                    continue
                k = c - 1
            else:
                if cy == ncy - 1:
                    continue
                k = c + 1
            should, cand, rising, falling = _scan_side(
                V, snap, i0, j0, is_exit, probe, side, first, i0, i1, j0, j1
            )
            if cand < Vc[k]:
                Vc[k] = cand
                if pos[k] >= 0:
                    heap_decrease(heap, pos, Vc, k)
            if should:
                if fast:
                    mon_checks += 1
                    if rising and not falling:
                        flags[k, _ENTRY[side, 0]] = True
                        mon_hits += 1
                    elif falling and not rising:
                        flags[k, _ENTRY[side, 1]] = True
                        mon_hits += 1
                    else:
                        flags[k, _ENTRY[side, 0]] = True
                        flags[k, _ENTRY[side, 1]] = True
                else:
                    flags[k, _ENTRY[side, 0]] = True
                    flags[k, _ENTRY[side, 1]] = True
                if pos[k] < 0:
                    size = heap_push(heap, pos, Vc, size, k)
    return removals, sweeps, updates, mon_checks, mon_hits, size == 0


def _run_heap_cells(problem: Problem, cells: CellDecomposition, fast: bool, max_removals: int | None) -> SolverOutput:
    if cells.grid != problem.grid:
        raise ConfigurationError("cell decomposition was built for a different grid")
    V = problem.initial_values()
    F = problem.speed_values()
    is_exit = problem.exit_mask
    probe = probe_costs(problem, cells)
    exit_cells = cells.exit_cells(problem)
    node_cells = cells.node_cell[problem.exit_nodes[:, 0], problem.exit_nodes[:, 1]]
    start = np.array([problem.exit_cost[node_cells == c].max() for c in exit_cells])
    budget = 100 * cells.J if max_removals is None else max_removals
    removals, sweeps, updates, mon_checks, mon_hits, finished = _heap_cells(
        V, F, is_exit, probe, problem.grid.h, cells.x_edges, cells.y_edges,
        exit_cells.astype(np.int64), start, fast, budget,
    )
    J = cells.J
    extras = {
        "AvHR": removals.sum() / J,
        "AvS": sweeps.sum() / J,
        "cell_removals": removals,
        "cell_sweeps": sweeps,
        "terminated": bool(finished),
    }
    if fast:
        extras["mon_checks"] = int(mon_checks)
        extras["Mon%"] = 100.0 * mon_hits / mon_checks if mon_checks else 100.0
    return SolverOutput(
        V, sweeps=int(sweeps.sum()), node_updates=int(updates),
        heap_removals=int(removals.sum()), extras=extras,
    )


def hcm_solve(problem: Problem, cells: CellDecomposition, max_removals: int | None = None) -> SolverOutput:
    """Heap-Cell Method: cells processed by locking sweeps to convergence.

    Produces the exact discrete solution for any decomposition. ``extras``
    carries ``AvHR`` and ``AvS``; ``terminated`` is False only if the removal
    budget (default ``100 * J``) ran out.
    """
    return _run_heap_cells(problem, cells, False, max_removals)


def fhcm_solve(problem: Problem, cells: CellDecomposition, max_removals: int | None = None) -> SolverOutput:
    """Fast Heap-Cell Method: one sweep per raised direction flag per removal.

    Flags raised by a neighbor are narrowed by the border monotonicity check;
    ``extras['Mon%']`` is the share of those checks that left a single direction.
    """
    return _run_heap_cells(problem, cells, True, max_removals)


def monotonicity_flags(boundary_values, border: str) -> frozenset[Direction]:
    """Sweep directions to raise on a cell given the neighbor's border values.

    ``border`` names where the processed neighbor lies relative to the
    receiving cell (``"west"`` means the neighbor is to the west). Values run
    north to south on vertical borders and west to east on horizontal ones.
    """
    side_of_receiver = {"west": EAST, "east": WEST, "south": NORTH, "north": SOUTH}[border]
    v = np.asarray(boundary_values, dtype=float)
    if v.size == 0:
        raise ValueError("empty border")
    step = np.diff(v)
    rising, falling = bool(np.all(step >= 0)), bool(np.all(step <= 0))
    up, down = (Direction(int(d)) for d in _ENTRY[side_of_receiver])
    if rising and not falling:
        return frozenset({up})
    if falling and not rising:
        return frozenset({down})
    return frozenset({up, down})


def scan_cell_boundary(
    problem: Problem,
    cells: CellDecomposition,
    c: int,
    k: int,
    before: np.ndarray,
    after: np.ndarray,
    first_removal: bool = False,
    fast: bool = False,
) -> tuple[bool, frozenset[Direction], float]:
    """Decide whether processing cell ``c`` must (re)queue its neighbor ``k``.

    Returns ``(should_add, flags_to_raise, cell_value_candidate)``; ``before``
    and ``after`` are full value arrays around the processing of ``c``. With
    ``fast`` the flags are narrowed by the monotonicity check, as in FHCM.
    """
    side = next((s for s in range(4) if cells.neighbor(c, s) == k), None)
    if side is None:
        raise ConfigurationError(f"cell {k} is not a neighbor of cell {c}")
    i0, i1, j0, j1 = cells.node_range(c)
    probe = probe_costs(problem, cells)
    snap = np.ascontiguousarray(before[i0:i1, j0:j1], dtype=float)
    should, cand, rising, falling = _scan_side(
        np.ascontiguousarray(after, dtype=float), snap, i0, j0, problem.exit_mask,
        probe, side, first_removal, i0, i1, j0, j1,
    )
    if not should:
        return False, frozenset(), float(cand)
    up, down = (Direction(int(d)) for d in _ENTRY[side])
    if fast and rising != falling:
        return True, frozenset({up if rising else down}), float(cand)
    return True, frozenset({up, down}), float(cand)
