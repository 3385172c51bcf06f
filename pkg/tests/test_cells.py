import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eikonal_hybrid import (
    ConfigurationError, Direction, build_cells, build_problem, fhcm_solve, fmm_solve, hcm_solve, lsm_solve,
    monotonicity_flags, scan_cell_boundary,
)
from eikonal_hybrid.cells import EAST, NORTH, SOUTH, WEST, cell_value_candidate

NW, SW, NE, SE = Direction.NW, Direction.SW, Direction.NE, Direction.SE


def test_equal_cells():
    p = build_problem("constant", 176)
    cells = build_cells(p.grid, 22)
    assert cells.J == 484
    assert set(np.diff(cells.x_edges)) == {8} and set(np.diff(cells.y_edges)) == {8}


def test_remainder_goes_last():
    cells = build_cells(build_problem("constant", 9).grid, 2)
    assert list(np.diff(cells.x_edges)) == [4, 5]


def test_partition_and_neighbors():
    cells = build_cells(build_problem("constant", 13).grid, 3, 4)
    counts = np.bincount(cells.node_cell.ravel(), minlength=cells.J)
    assert counts.sum() == 13 * 13 and np.all(counts > 0)
    c = cells.index(1, 1)
    assert cells.neighbor(c, WEST) == cells.index(0, 1)
    assert cells.neighbor(c, NORTH) == cells.index(1, 2)
    assert cells.neighbor(cells.index(0, 0), SOUTH) == -1
    assert len(cells.neighbors(c)) == 4
    i0, i1, j0, j1 = cells.node_range(c)
    assert len(cells.halo(c)) == 2 * (i1 - i0) + 2 * (j1 - j0)


def test_single_cell():
    cells = build_cells(build_problem("constant", 7).grid, 1)
    assert cells.J == 1 and cells.neighbors(0) == [] and cells.halo(0) == []


def test_bad_cell_counts():
    g = build_problem("constant", 5).grid
    with pytest.raises(ConfigurationError):
        build_cells(g, 0)
    with pytest.raises(ConfigurationError):
        build_cells(g, 6)


def test_cell_value_candidate():
    assert cell_value_candidate(1.0, 1.0, 0.01, 0.1) == pytest.approx(1.055)
    assert cell_value_candidate(0.0, 2.0, 0.1, 0.1) == pytest.approx(0.05)
    assert cell_value_candidate(np.inf, 3.0, 0.1, 0.2) == np.inf


def test_monotonicity_flags():
    assert monotonicity_flags([1, 2, 3], "west") == {NW}
    assert monotonicity_flags([3, 2, 1], "west") == {SW}
    assert monotonicity_flags([3, 1, 2], "west") == {NW, SW}
    assert monotonicity_flags([5, 5, 5], "west") == {NW, SW}
    # horizontal borders run west to east
    assert monotonicity_flags([1, 2], "south") == {SW}
    assert monotonicity_flags([2, 1], "south") == {SE}
    assert monotonicity_flags([1, 2], "north") == {NW}
    assert monotonicity_flags([2, 1], "north") == {NE}
    assert monotonicity_flags([1, 2, 3], "east") == {NE}


class TestScan:
    """Cell (0,0) of a 8x8 grid cut 2x2 has been processed; its east neighbor is the receiver."""

    @pytest.fixture
    def setup(self):
        p = build_problem("constant", 8, exits=[(0, 0)])
        cells = build_cells(p.grid, 2)
        c, k = cells.index(0, 0), cells.index(1, 0)
        before = p.initial_values()
        after = before.copy()
        for j in range(4):
            after[:4, j] = 10.0 - j
        return p, cells, c, k, before, after

    def test_improvement_adds_with_both_flags(self, setup):
        p, cells, c, k, before, after = setup
        after = after.copy()
        after[3, 1] = 20  # border no longer monotone
        add, flags, cand = scan_cell_boundary(p, cells, c, k, before, after)
        assert add and flags == {NW, SW} and np.isfinite(cand)

    def test_monotone_border_narrows_in_fast_mode(self, setup):
        p, cells, c, k, before, after = setup
        add, flags, _ = scan_cell_boundary(p, cells, c, k, before, after, fast=True)
        assert add and flags == {NW}
        _, slow_flags, _ = scan_cell_boundary(p, cells, c, k, before, after, fast=False)
        assert slow_flags == {NW, SW}

    def test_nothing_changed(self, setup):
        p, cells, c, k, before, _ = setup
        add, flags, _ = scan_cell_boundary(p, cells, c, k, before, before.copy())
        assert not add and flags == frozenset()

    def test_no_strict_improvement_over_receiver(self, setup):
        p, cells, c, k, before, after = setup
        after = after.copy()
        after[4, :4] = 0.5  # receiver side already smaller
        add, flags, cand = scan_cell_boundary(p, cells, c, k, before, after)
        assert not add and flags == frozenset() and np.isfinite(cand)

    def test_not_a_neighbor(self, setup):
        p, cells, c, _, before, after = setup
        with pytest.raises(ConfigurationError):
            scan_cell_boundary(p, cells, c, cells.index(1, 1), before, after)


def test_hcm_single_cell_is_lsm():
    p = build_problem("checker11", 44)
    out = hcm_solve(p, build_cells(p.grid, 1))
    ref = lsm_solve(p)
    np.testing.assert_array_equal(out.values, ref.values)
    assert out.extras["AvHR"] == 1 and out.sweeps == ref.sweeps


@pytest.mark.parametrize("name", ["checker11", "sinusoidA", "comb8"])
@pytest.mark.parametrize("nc", [2, 5, 11])
def test_hcm_exact(name, nc):
    p = build_problem(name, 55)
    out = hcm_solve(p, build_cells(p.grid, nc))
    np.testing.assert_allclose(out.values, fmm_solve(p).values, rtol=1e-12)
    assert out.extras["terminated"]


def test_hcm_boundary_exits():
    p = build_problem("sinusoidB", 60, exits="boundary")
    out = hcm_solve(p, build_cells(p.grid, 6))
    np.testing.assert_allclose(out.values, fmm_solve(p).values, rtol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(8, 40), st.integers(1, 8), st.integers(1, 8), st.floats(0, 1), st.floats(0, 1),
       st.integers(0, 2**31 - 1))
def test_cell_methods_on_random_fields(m, cx, cy, px, py, seed):
    rng = np.random.default_rng(seed)
    table = rng.uniform(0.2, 3.0, (m, m))
    p = build_problem(lambda x, y: table[np.rint(x * (m - 1)).astype(int), np.rint(y * (m - 1)).astype(int)],
                      m, point=(px, py))
    cells = build_cells(p.grid, min(cx, m), min(cy, m))
    exact = fmm_solve(p).values
    np.testing.assert_allclose(hcm_solve(p, cells).values, exact, rtol=1e-12)
    fast = fhcm_solve(p, cells).values
    assert np.all(fast >= exact - 1e-12) and np.all(np.isfinite(fast))


def test_fhcm_constant_speed_exact():
    p = build_problem("constant", 88)
    for nc in (2, 4, 11, 22):
        out = fhcm_solve(p, build_cells(p.grid, nc))
        np.testing.assert_allclose(out.values, fmm_solve(p).values, rtol=1e-12)
        assert 0 <= out.extras["Mon%"] <= 100


def test_removal_budget_is_reported():
    p = build_problem("checker11", 44)
    out = hcm_solve(p, build_cells(p.grid, 4), max_removals=2)
    assert not out.extras["terminated"] and out.heap_removals == 2
