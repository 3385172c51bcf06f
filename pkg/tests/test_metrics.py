import numpy as np
import pytest

from eikonal_hybrid import build_problem, error_fields, error_ratios, evaluate, fmm_solve, ground_truth
from eikonal_hybrid.metrics import refine_problem


def test_formulas():
    r = error_ratios(np.array([1.0, 2.0]), np.array([1.0, 4.0]), np.array([True, True]))
    assert (r.max_error_ratio, r.avg_error_ratio, r.ratio_of_max) == (2.0, 1.5, 2.0)


def test_scaling_and_identity():
    e = np.array([0.5, 1.0, 3.0])
    mask = np.ones(3, bool)
    r = error_ratios(e, 2 * e, mask)
    assert r.max_error_ratio == r.avg_error_ratio == r.ratio_of_max == 2.0
    r = error_ratios(e, e, mask)
    assert r.max_error_ratio == r.avg_error_ratio == r.ratio_of_max == 1.0


def test_empty_xplus():
    v = np.zeros((3, 3))
    e, E, xp = error_fields(v + 1, v, v)
    assert not xp.any()
    r = error_ratios(e, E, xp)
    assert r.empty_xplus and r.max_error_ratio == 1.0 and r.l_inf == 1.0


def test_single_node_fields():
    truth = np.zeros((3, 3))
    exact = truth.copy()
    exact[1, 1] = 2.0
    method = truth.copy()
    method[1, 1] = 3.0
    e, E, xp = error_fields(method, exact, truth)
    assert xp.sum() == 1 and xp[1, 1] and e[1, 1] == 2 and E[1, 1] == 3


def test_exit_nodes_excluded():
    truth = np.zeros((2, 2))
    exact = np.ones((2, 2))
    mask = np.zeros((2, 2), bool)
    mask[0, 0] = True
    method = exact.copy()
    method[0, 0] = 50
    r = evaluate(method, exact, truth, mask)
    assert r.M_plus == 3 and r.l_inf == 1.0


def test_shape_mismatch():
    with pytest.raises(ValueError):
        error_fields(np.zeros(3), np.zeros(3), np.zeros(4))


def test_refine_one_is_identity():
    p = build_problem("sinusoidA", 30)
    np.testing.assert_array_equal(ground_truth(p, 1), fmm_solve(p).values)


def test_refine_index_mapping():
    p = build_problem("constant", 9, exits=[(3, 5)])
    fine = refine_problem(p, 4)
    assert fine.grid.m == 33 and fine.grid.h == pytest.approx(p.grid.h / 4)
    assert tuple(fine.exit_nodes[0]) == (12, 20)


def test_ground_truth_close_to_distance():
    p = build_problem("constant", 65)
    X, Y = p.grid.coordinates()
    d = np.hypot(X - 0.5, Y - 0.5)
    truth = ground_truth(p)
    assert np.max(np.abs(truth - d)) < 4 * p.grid.h
    assert np.max(np.abs(truth - d)) < np.max(np.abs(fmm_solve(p).values - d))
