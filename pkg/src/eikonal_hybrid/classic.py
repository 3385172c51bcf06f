"""Single-scale solvers: Fast Marching, Fast Sweeping and Locking Sweeping.

All three converge to the same solution of the upwind discretization.
"""
from __future__ import annotations

import numpy as np
from numba import njit

from .grid import Problem, SolverOutput
from .heap import heap_decrease, heap_pop, heap_push
from .local_update import _node_update

FAR, CONSIDERED, ACCEPTED = 0, 1, 2


def sweep_order(sweep_number: int, m: int, n: int) -> tuple[range, range]:
    """Node orderings ``(i_order, j_order)`` for one Gauss-Seidel sweep."""
    d = sweep_number % 4
    up_i, down_i = range(m), range(m - 1, -1, -1)
    up_j, down_j = range(n), range(n - 1, -1, -1)
    return {0: (up_i, up_j), 1: (up_i, down_j), 2: (down_i, down_j), 3: (down_i, up_j)}[d]


@njit(cache=True)
def _sweep_bounds(d, lo, hi):
    """(start, stop, step) along one axis; ``d`` says whether the axis runs ascending."""
    if d:
        return lo, hi, 1
    return hi - 1, lo - 1, -1


@njit(cache=True)
def _fmm(V, F, is_exit, h):
    m, n = V.shape
    N = m * n
    keys = V.reshape(N)
    status = np.zeros(N, dtype=np.int8)
    heap = np.empty(N, dtype=np.int64)
    pos = np.full(N, -1, dtype=np.int64)
    order = np.empty(N, dtype=np.int64)
    size = 0
    updates = 0
    removals = 0

    exit_flat = is_exit.reshape(N)
    for k in range(N):
        if exit_flat[k]:
            status[k] = ACCEPTED
    di = np.array([-1, 1, 0, 0])
    dj = np.array([0, 0, -1, 1])
    for k in range(N):
        if not exit_flat[k]:
            continue
        i, j = k // n, k % n
        for t in range(4):
            a, b = i + di[t], j + dj[t]
            if a < 0 or a >= m or b < 0 or b >= n:
                continue
            nb = a * n + b
            if status[nb] != FAR:
                continue
            status[nb] = CONSIDERED
            cand = _node_update(V, F, a, b, h)
            updates += 1
            if cand < V[a, b]:
                V[a, b] = cand
            size = heap_push(heap, pos, keys, size, nb)

    while size > 0:
        k, size = heap_pop(heap, pos, keys, size)
        status[k] = ACCEPTED
        order[removals] = k
        removals += 1
        i, j = k // n, k % n
        for t in range(4):
            a, b = i + di[t], j + dj[t]
            if a < 0 or a >= m or b < 0 or b >= n:
                continue
            nb = a * n + b
            if status[nb] == ACCEPTED:
                continue
            cand = _node_update(V, F, a, b, h)
            updates += 1
            if cand < V[a, b]:
                V[a, b] = cand
                if status[nb] == CONSIDERED:
                    heap_decrease(heap, pos, keys, nb)
            if status[nb] == FAR:
                status[nb] = CONSIDERED
                size = heap_push(heap, pos, keys, size, nb)
    return order[:removals], updates


@njit(cache=True)
def _fsm(V, F, is_exit, h, max_sweeps):
    m, n = V.shape
    sweeps = 0
    updates = 0
    while True:
        d = sweeps % 4
        i0, i1, si = _sweep_bounds(d <= 1, 0, m)
        j0, j1, sj = _sweep_bounds(d == 0 or d == 3, 0, n)
        changed = False
        for i in range(i0, i1, si):
            for j in range(j0, j1, sj):
                if is_exit[i, j]:
                    continue
                cand = _node_update(V, F, i, j, h)
                updates += 1
                if cand < V[i, j]:
                    V[i, j] = cand
                    changed = True
        sweeps += 1
        if not changed or sweeps >= max_sweeps:
            break
    return sweeps, updates


@njit(cache=True)
def _unlock_larger(V, is_exit, unlocked, i, j):
    m, n = V.shape
    v = V[i, j]
    if i > 0 and V[i - 1, j] > v and not is_exit[i - 1, j]:
        unlocked[i - 1, j] = True
    if i + 1 < m and V[i + 1, j] > v and not is_exit[i + 1, j]:
        unlocked[i + 1, j] = True
    if j > 0 and V[i, j - 1] > v and not is_exit[i, j - 1]:
        unlocked[i, j - 1] = True
    if j + 1 < n and V[i, j + 1] > v and not is_exit[i, j + 1]:
        unlocked[i, j + 1] = True


@njit(cache=True)
def _initial_unlocked(V, is_exit):
    """Everything locked except non-exit neighbors of exit nodes."""
    m, n = V.shape
    unlocked = np.zeros((m, n), dtype=np.bool_)
    for i in range(m):
        for j in range(n):
            if is_exit[i, j]:
                if i > 0:
                    unlocked[i - 1, j] = True
                if i + 1 < m:
                    unlocked[i + 1, j] = True
                if j > 0:
                    unlocked[i, j - 1] = True
                if j + 1 < n:
                    unlocked[i, j + 1] = True
    for i in range(m):
        for j in range(n):
            if is_exit[i, j]:
                unlocked[i, j] = False
    return unlocked


@njit(cache=True)
def _lsm_sweep(V, F, is_exit, unlocked, h, d, i_lo, i_hi, j_lo, j_hi):
    """One locking sweep over the block ``[i_lo, i_hi) x [j_lo, j_hi)``."""
    i0, i1, si = _sweep_bounds(d <= 1, i_lo, i_hi)
    j0, j1, sj = _sweep_bounds(d == 0 or d == 3, j_lo, j_hi)
    changed = False
    updates = 0
    for i in range(i0, i1, si):
        for j in range(j0, j1, sj):
            if not unlocked[i, j]:
                continue
            unlocked[i, j] = False
            cand = _node_update(V, F, i, j, h)
            updates += 1
            if cand < V[i, j]:
                V[i, j] = cand
                changed = True
                _unlock_larger(V, is_exit, unlocked, i, j)
    return changed, updates


@njit(cache=True)
def _lsm(V, F, is_exit, h, max_sweeps):
    m, n = V.shape
    unlocked = _initial_unlocked(V, is_exit)
    sweeps = 0
    updates = 0
    while True:
        changed, u = _lsm_sweep(V, F, is_exit, unlocked, h, sweeps % 4, 0, m, 0, n)
        updates += u
        sweeps += 1
        if not changed or sweeps >= max_sweeps:
            break
    return sweeps, updates


def _setup(problem: Problem):
    return problem.initial_values(), problem.speed_values(), problem.exit_mask, problem.grid.h


def fmm_solve(problem: Problem) -> SolverOutput:
    """Fast Marching; ``extras['order']`` holds the acceptance order (linear indices ``i*n + j``)."""
    V, F, is_exit, h = _setup(problem)
    order, updates = _fmm(V, F, is_exit, h)
    return SolverOutput(
        V, node_updates=int(updates), heap_removals=len(order), extras={"order": order}
    )


def fsm_solve(problem: Problem, max_sweeps: int = 1_000_000) -> SolverOutput:
    V, F, is_exit, h = _setup(problem)
    sweeps, updates = _fsm(V, F, is_exit, h, max_sweeps)
    return SolverOutput(V, sweeps=int(sweeps), node_updates=int(updates))


def lsm_solve(problem: Problem, max_sweeps: int = 1_000_000) -> SolverOutput:
    V, F, is_exit, h = _setup(problem)
    sweeps, updates = _lsm(V, F, is_exit, h, max_sweeps)
    return SolverOutput(V, sweeps=int(sweeps), node_updates=int(updates))
