"""Grid geometry, problem definition and solver output containers."""
from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import ConfigurationError, DomainError


@dataclass(frozen=True)
class Grid:
    """Vertex-centred uniform lattice: node (i, j) sits at ``origin + (i*h, j*h)``."""

    m: int
    n: int
    h: float
    origin: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if self.m < 2 or self.n < 2:
            raise ConfigurationError(f"grid needs at least 2x2 nodes, got {self.m}x{self.n}")
        if not self.h > 0:
            raise ConfigurationError(f"grid spacing must be positive, got {self.h}")

    @classmethod
    def unit_square(cls, m: int, n: int | None = None) -> Grid:
        n = m if n is None else n
        if m < 2 or n < 2:
            raise ConfigurationError(f"grid needs at least 2x2 nodes, got {m}x{n}")
        if m != n:
            # a single spacing must cover [0, 1] in both directions
            raise ConfigurationError("unit-square grids must be square (m == n)")
        return cls(m, n, 1.0 / (m - 1))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.m, self.n)

    @property
    def size(self) -> int:
        return self.m * self.n

    def position(self, i: int, j: int) -> tuple[float, float]:
        return (self.origin[0] + i * self.h, self.origin[1] + j * self.h)

    def coordinates(self) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(X, Y)`` node coordinate arrays of shape ``(m, n)``."""
        x = self.origin[0] + self.h * np.arange(self.m)
        y = self.origin[1] + self.h * np.arange(self.n)
        return np.meshgrid(x, y, indexing="ij")

    @property
    def extent(self) -> tuple[float, float, float, float]:
        x0, y0 = self.origin
        return (x0, x0 + (self.m - 1) * self.h, y0, y0 + (self.n - 1) * self.h)


def snap_point_to_node(grid: Grid, p: tuple[float, float]) -> tuple[int, int]:
    """Nearest node to ``p``; ties go to the smaller i, then the smaller j."""
    x, y = float(p[0]), float(p[1])
    xmin, xmax, ymin, ymax = grid.extent
    tol = 1e-12 * max(1.0, abs(xmax), abs(ymax))
    if not (xmin - tol <= x <= xmax + tol and ymin - tol <= y <= ymax + tol):
        raise DomainError(f"point {p} lies outside the grid bounding box {grid.extent}")
    return _nearest_index(x, grid.origin[0], grid.h, grid.m), _nearest_index(
        y, grid.origin[1], grid.h, grid.n
    )


def _nearest_index(x: float, x0: float, h: float, count: int) -> int:
    # Euclidean distance separates per axis on a lattice, so per-axis rounding is exact.
    lo = min(max(int(np.floor((x - x0) / h)), 0), count - 1)
    cands = [c for c in (lo - 1, lo, lo + 1) if 0 <= c < count]
    dist = [abs(x0 + c * h - x) for c in cands]
    best = min(dist)
    # distances equal up to rounding count as a tie -> smallest index
    return next(c for c, d in zip(cands, dist) if d <= best + 1e-9 * h)


@dataclass(frozen=True, eq=False)
class Problem:
    """One Eikonal instance: a grid, a speed field and an exit set with costs."""

    grid: Grid
    speed: Callable[[Any, Any], Any]
    exit_nodes: np.ndarray  # (k, 2) int
    exit_cost: np.ndarray  # (k,) float
    name: str = ""

    def __post_init__(self):
        nodes = np.asarray(self.exit_nodes, dtype=np.int64).reshape(-1, 2)
        cost = np.asarray(self.exit_cost, dtype=np.float64).reshape(-1)
        if nodes.shape[0] == 0:
            raise ConfigurationError("exit set is empty")
        if cost.shape[0] != nodes.shape[0]:
            raise ConfigurationError("exit costs must match exit nodes one to one")
        if not np.all(np.isfinite(cost)):
            raise ConfigurationError("exit costs must be finite")
        g = self.grid
        if np.any(nodes < 0) or np.any(nodes[:, 0] >= g.m) or np.any(nodes[:, 1] >= g.n):
            raise ConfigurationError("exit node outside the grid")
        nodes.setflags(write=False)
        cost.setflags(write=False)
        object.__setattr__(self, "exit_nodes", nodes)
        object.__setattr__(self, "exit_cost", cost)

    @property
    def exit_mask(self) -> np.ndarray:
        mask = np.zeros(self.grid.shape, dtype=np.bool_)
        mask[self.exit_nodes[:, 0], self.exit_nodes[:, 1]] = True
        return mask

    def initial_values(self) -> np.ndarray:
        """Exit costs on Q, +inf elsewhere (repeated nodes keep the smallest cost)."""
        values = np.full(self.grid.shape, np.inf)
        np.minimum.at(values, (self.exit_nodes[:, 0], self.exit_nodes[:, 1]), self.exit_cost)
        return values

    def speed_values(self) -> np.ndarray:
        """Speed sampled at every node, shape ``(m, n)``."""
        X, Y = self.grid.coordinates()
        F = np.broadcast_to(np.asarray(self.speed(X, Y), dtype=np.float64), X.shape)
        if not np.all(F > 0):
            raise ConfigurationError("speed must be positive at every node")
        return np.ascontiguousarray(F)


@dataclass
class SolverOutput:
    values: np.ndarray
    sweeps: int = 0
    node_updates: int = 0
    heap_removals: int = 0
    extras: dict[str, Any] = field(default_factory=dict)


def build_problem(
    speed: str | Callable,
    grid_size: int,
    exits: str | Iterable | Mapping = "point",
    point: tuple[float, float] | None = None,
    cost: float = 0.0,
) -> Problem:
    """Build a unit-square problem.

    ``speed`` is a registered problem name (see :mod:`eikonal_hybrid.problems`)
    or any vectorised callable ``F(x, y)``. ``exits`` is ``"point"`` (snap
    ``point`` to the nearest node), ``"boundary"`` (every perimeter node), or
    an explicit collection of nodes: a mapping ``{(i, j): q}`` or an iterable
    of ``(i, j)`` / ``((i, j), q)`` entries.
    """
    from . import problems

    name = ""
    if isinstance(speed, str):
        name = speed
        if point is None:
            point = problems.default_source(speed)
        speed = problems.speed_by_name(speed)
    grid = Grid.unit_square(grid_size)

    if isinstance(exits, str):
        if exits == "point":
            node = snap_point_to_node(grid, point if point is not None else (0.5, 0.5))
            nodes, costs = [node], [cost]
        elif exits == "boundary":
            mask = np.zeros(grid.shape, dtype=bool)
            mask[0, :] = mask[-1, :] = mask[:, 0] = mask[:, -1] = True
            nodes = np.argwhere(mask)
            costs = np.full(len(nodes), cost)
        else:
            raise ConfigurationError(f"unknown exit-set mode {exits!r}")
    else:
        items = exits.items() if isinstance(exits, Mapping) else exits
        nodes, costs = [], []
        for entry in items:
            if len(entry) == 2 and np.ndim(entry[0]) == 1:
                (i, j), q = entry
            else:
                (i, j), q = entry, cost
            nodes.append((int(i), int(j)))
            costs.append(float(q))
        if not nodes:
            raise ConfigurationError("exit set is empty")
    return Problem(grid, speed, np.asarray(nodes), np.asarray(costs, dtype=float), name=name)
