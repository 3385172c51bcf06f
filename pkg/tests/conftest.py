import functools

import pytest

from eikonal_hybrid import build_problem, fmm_solve, ground_truth


@functools.lru_cache(maxsize=None)
def cached_reference(name: str, m: int, exits: str = "point"):
    """(problem, fmm values, refined ground truth) shared across test modules."""
    p = build_problem(name, m, exits=exits)
    return p, fmm_solve(p).values, ground_truth(p)


@pytest.fixture(scope="session")
def reference():
    return cached_reference
