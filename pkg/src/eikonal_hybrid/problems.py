"""Speed fields and named test problems on the unit square."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import ConfigurationError


@dataclass(frozen=True)
class SpeedSpec:
    """A positive speed field ``F(x, y)``, vectorised over numpy arrays."""

    kind: str
    params: dict[str, Any] = field(default_factory=dict)

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return _EVALUATORS[self.kind](x, y, **self.params)


def _constant(x, y, value=1.0):
    return np.full(np.broadcast(x, y).shape, value)


def _checkerboard(x, y, k, slow, fast):
    a = np.clip(np.floor(k * x), 0, k - 1).astype(np.int64)
    b = np.clip(np.floor(k * y), 0, k - 1).astype(np.int64)
    return np.where((a + b) % 2 == 0, slow, fast)


def _sinusoid(x, y, amplitude, freq):
    return 1.0 + amplitude * np.sin(freq * np.pi * x) * np.sin(freq * np.pi * y)


def _comb(x, y, centers, width, gap, barrier_speed):
    x, y = np.broadcast_arrays(x, y)
    inside = np.zeros(x.shape, dtype=bool)
    half = 0.5 * width
    for i, cx in enumerate(centers, start=1):
        in_x = np.abs(x - cx) <= half
        in_y = y <= 1.0 - gap if i % 2 else y >= gap
        inside |= in_x & in_y
    return np.where(inside, barrier_speed, 1.0)


_EVALUATORS = {
    "constant": _constant,
    "checkerboard": _checkerboard,
    "sinusoid": _sinusoid,
    "comb_maze": _comb,
}


def speed_constant() -> SpeedSpec:
    return SpeedSpec("constant")


def speed_checkerboard(k: int, slow: float = 1.0, fast: float = 2.0) -> SpeedSpec:
    """k x k checkers, the centre one slow; checker edges belong to the checker above/right."""
    if k < 1 or k % 2 == 0:
        raise ConfigurationError(f"checkerboard size must be odd and positive, got {k}")
    if not (slow > 0 and fast > 0):
        raise ConfigurationError("checker speeds must be positive")
    return SpeedSpec("checkerboard", {"k": k, "slow": slow, "fast": fast})


def speed_sinusoid(amplitude: float, freq: int) -> SpeedSpec:
    """``1 + amplitude * sin(freq*pi*x) * sin(freq*pi*y)``."""
    if abs(amplitude) >= 1:
        raise ConfigurationError(f"|amplitude| must be < 1 to keep F positive, got {amplitude}")
    return SpeedSpec("sinusoid", {"amplitude": amplitude, "freq": freq})


def speed_comb_maze(
    n_barriers: int,
    barrier_speed: float = 0.01,
    width: float = 0.04,
    gap: float = 0.1,
    align: int | None = None,
) -> SpeedSpec:
    """Vertical slow barriers at ``x_i = i/(n_barriers+1)``, gaps alternating top/bottom.

    Barrier i spans ``|x - x_i| <= width/2`` and ``y <= 1-gap`` (odd i) or
    ``y >= gap`` (even i). With ``align`` set, barrier centres snap to the
    nearest multiple of ``1/align``.
    """
    if n_barriers < 1:
        raise ConfigurationError("need at least one barrier")
    if not 0 < barrier_speed:
        raise ConfigurationError("barrier speed must be positive")
    centers = np.arange(1, n_barriers + 1) / (n_barriers + 1)
    if align:
        centers = np.round(centers * align) / align
    if np.any(np.diff(centers) <= width) or centers[0] - width / 2 < 0 or centers[-1] + width / 2 > 1:
        raise ConfigurationError("comb-maze barriers overlap or leave the domain")
    return SpeedSpec(
        "comb_maze",
        {"centers": tuple(float(c) for c in centers), "width": width, "gap": gap, "barrier_speed": barrier_speed},
    )


SINUSOID_A = (0.5, 20)
SINUSOID_B = (0.99, 2)

_NAMED = {
    "constant": lambda: speed_constant(),
    "checker11": lambda: speed_checkerboard(11),
    "checker41": lambda: speed_checkerboard(41),
    "sinusoidA": lambda: speed_sinusoid(*SINUSOID_A),
    "sinusoidB": lambda: speed_sinusoid(*SINUSOID_B),
    # walls on the 1/22 lattice so they coincide with 22x22 cell lines
    "comb4": lambda: speed_comb_maze(4, width=2 / 22, gap=2 / 22, align=22),
    "comb8": lambda: speed_comb_maze(8, width=0.04, gap=0.1),
}

PROBLEM_NAMES = tuple(_NAMED)


def speed_by_name(name: str) -> SpeedSpec:
    try:
        return _NAMED[name]()
    except KeyError:
        raise ConfigurationError(f"unknown problem {name!r}; expected one of {', '.join(_NAMED)}") from None


def default_source(name: str) -> tuple[float, float]:
    """Point-source location used by the named problem (the origin for comb mazes)."""
    speed_by_name(name)
    return (0.0, 0.0) if name.startswith("comb") else (0.5, 0.5)
