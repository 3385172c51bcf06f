import numpy as np
import pytest

from eikonal_hybrid import (
    PROBLEM_NAMES, ConfigurationError, build_cells, build_problem, speed_by_name, speed_checkerboard,
    speed_comb_maze, speed_constant, speed_sinusoid,
)
from eikonal_hybrid.problems import SINUSOID_A, SINUSOID_B, default_source


def test_constant():
    F = speed_constant()
    assert [float(F(x, x)) for x in (0, 0.5, 1)] == [1.0, 1.0, 1.0]


def test_checkerboard():
    F = speed_checkerboard(11)
    assert F(0.5, 0.5) == 1.0
    assert F(0.5 + 1 / 11, 0.5) == 2.0
    assert speed_checkerboard(41)(1.0, 1.0) == 1.0
    with pytest.raises(ConfigurationError):
        speed_checkerboard(10)


def test_sinusoids():
    A, B = speed_sinusoid(*SINUSOID_A), speed_sinusoid(*SINUSOID_B)
    assert B(0.25, 0.25) == pytest.approx(1.99)
    assert B(0.25, 0.75) == pytest.approx(0.01)
    np.testing.assert_allclose(A(0.0, np.linspace(0, 1, 11)), 1.0)
    with pytest.raises(ConfigurationError):
        speed_sinusoid(1.0, 2)


def test_comb_maze_barrier_and_gap():
    F = speed_comb_maze(4, width=2 / 22, gap=2 / 22, align=22)
    x1 = F.params["centers"][0]
    assert F(x1, 0.5) == 0.01
    assert F(x1, 0.99) == 1.0  # gap of the first barrier is at the top
    x2 = F.params["centers"][1]
    assert F(x2, 0.01) == 1.0 and F(x2, 0.5) == 0.01
    with pytest.raises(ConfigurationError):
        speed_comb_maze(8, width=0.2)


def test_comb4_walls_follow_cell_lines():
    # at 1408 nodes (64 per cell) each wall edge falls between two cells
    F = speed_by_name("comb4")
    p = build_problem("comb4", 1408)
    cells = build_cells(p.grid, 22)
    slow = p.speed_values()[:, 700] < 1
    cols = np.flatnonzero(np.diff(slow.astype(int)))
    cell_lines = set(cells.x_edges[1:-1] - 1)
    assert len(cols) == 8 and set(cols) <= cell_lines
    assert F.params["width"] == pytest.approx(2 / 22)


@pytest.mark.parametrize("name", PROBLEM_NAMES)
def test_named_problems_are_positive(name):
    p = build_problem(name, 41 if name == "checker41" else 33)
    assert np.all(p.speed_values() > 0)


def test_unknown_name():
    with pytest.raises(ConfigurationError, match="nope"):
        speed_by_name("nope")


def test_sources():
    assert default_source("comb8") == (0.0, 0.0)
    assert default_source("checker11") == (0.5, 0.5)
