"""First-order upwind local solver on a 5-point stencil.

The ``_``-prefixed kernels are numba-compiled and used by every solver; the
public wrappers add input validation for interactive use.
"""
from __future__ import annotations

import math
from enum import IntEnum
from typing import NamedTuple

from numba import njit

from .errors import ContractViolation

INF = math.inf


class Direction(IntEnum):
    """Sweep directions, numbered like the four-sweep rotation.

    A sweep *from* SW visits i ascending, j ascending and therefore uses the
    west and south neighbors.
    """

    SW = 0
    NW = 1
    NE = 2
    SE = 3


class NeighborValues(NamedTuple):
    east: float
    west: float
    north: float
    south: float


@njit(cache=True)
def _quadrant_update(ua, ub, f, h):
    if ub < ua:
        ua, ub = ub, ua
    if ua == INF:
        return INF
    c = h / f
    # ub may be +inf; the comparison then selects the one-sided branch
    diff = ub - ua
    if diff <= c:
        return 0.5 * (ua + ub) + 0.5 * math.sqrt(2.0 * c * c - diff * diff)
    return ua + c


@njit(cache=True)
def _node_update(V, F, i, j, h):
    m, n = V.shape
    ux = INF
    if i > 0:
        ux = V[i - 1, j]
    if i + 1 < m and V[i + 1, j] < ux:
        ux = V[i + 1, j]
    uy = INF
    if j > 0:
        uy = V[i, j - 1]
    if j + 1 < n and V[i, j + 1] < uy:
        uy = V[i, j + 1]
    return _quadrant_update(ux, uy, F[i, j], h)


@njit(cache=True)
def _directional_update(V, F, i, j, h, d):
    m, n = V.shape
    ux = INF
    uy = INF
    if d == 0 or d == 1:  # from the west
        if i > 0:
            ux = V[i - 1, j]
    elif i + 1 < m:
        ux = V[i + 1, j]
    if d == 0 or d == 3:  # from the south
        if j > 0:
            uy = V[i, j - 1]
    elif j + 1 < n:
        uy = V[i, j + 1]
    return _quadrant_update(ux, uy, F[i, j], h)


def _check(*xs):
    for x in xs:
        if math.isnan(x):
            raise ContractViolation("NaN passed to the local solver")


def quadrant_update(u_a: float, u_b: float, f: float, h: float) -> float:
    """Update from one quadrant with one horizontal and one vertical neighbor.

    Returns the root of ``(U-u_a)^2 + (U-u_b)^2 = (h/f)^2`` with
    ``U >= max(u_a, u_b)`` when it exists, and the one-sided value
    ``h/f + min(u_a, u_b)`` otherwise.
    """
    _check(u_a, u_b, f, h)
    if not (f > 0 and h > 0):
        raise ContractViolation(f"speed and spacing must be positive (f={f}, h={h})")
    return float(_quadrant_update(float(u_a), float(u_b), float(f), float(h)))


def node_update(nb: NeighborValues, f: float, h: float) -> float:
    nb = NeighborValues(*nb)
    _check(*nb)
    return quadrant_update(min(nb.east, nb.west), min(nb.north, nb.south), f, h)


def directional_update(nb: NeighborValues, direction: Direction | str | int, f: float, h: float) -> float:
    """Quadrant update from exactly the two neighbors a sweep from ``direction`` has visited."""
    nb = NeighborValues(*nb)
    _check(*nb)
    d = Direction[direction] if isinstance(direction, str) else Direction(direction)
    ux = nb.west if d in (Direction.SW, Direction.NW) else nb.east
    uy = nb.south if d in (Direction.SW, Direction.SE) else nb.north
    return quadrant_update(ux, uy, f, h)
