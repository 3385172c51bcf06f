import numpy as np
import pytest

from eikonal_hybrid import ConfigurationError, DomainError, Grid, Problem, build_problem, snap_point_to_node


def test_snap_examples():
    assert snap_point_to_node(Grid.unit_square(3), (0.5, 0.5)) == (1, 1)
    assert snap_point_to_node(Grid.unit_square(2), (0.49, 0.49)) == (0, 0)
    assert snap_point_to_node(Grid.unit_square(2), (0.5, 0.5)) == (0, 0)


def test_snap_centre_of_even_grid_ties_low():
    assert snap_point_to_node(Grid.unit_square(176), (0.5, 0.5)) == (87, 87)


def test_snap_outside():
    with pytest.raises(DomainError):
        snap_point_to_node(Grid.unit_square(5), (1.2, 0.5))


@pytest.mark.parametrize("m", [2, 7, 176])
def test_position_round_trip(m):
    g = Grid.unit_square(m)
    for i in range(0, m, max(1, m // 9)):
        for j in range(0, m, max(1, m // 7)):
            assert snap_point_to_node(g, g.position(i, j)) == (i, j)


def test_grid_validation():
    with pytest.raises(ConfigurationError):
        Grid(1, 4, 0.1)
    with pytest.raises(ConfigurationError):
        Grid(4, 4, 0.0)
    with pytest.raises(ConfigurationError):
        Grid.unit_square(4, 5)


def test_build_problem_examples():
    p = build_problem("constant", 176)
    assert p.exit_nodes.shape == (1, 2)
    b = build_problem("sinusoidB", 176, exits="boundary")
    assert len(b.exit_nodes) == 700
    c = build_problem("checker11", 176)
    F = c.speed_values()
    assert set(np.unique(F)) == {1.0, 2.0}
    assert F[87, 87] == 1.0


def test_explicit_exits_and_costs():
    p = build_problem("constant", 5, exits={(0, 0): 0.5, (4, 4): 0.0})
    v = p.initial_values()
    assert v[0, 0] == 0.5 and v[4, 4] == 0.0 and np.isinf(v[2, 2])
    q = build_problem(lambda x, y: 1 + 0 * x, 5, exits=[(1, 1), ((2, 2), 3.0)])
    assert list(q.exit_cost) == [0.0, 3.0]


def test_problem_validation():
    g = Grid.unit_square(4)
    with pytest.raises(ConfigurationError):
        Problem(g, lambda x, y: 1.0, np.zeros((0, 2)), np.zeros(0))
    with pytest.raises(ConfigurationError):
        Problem(g, lambda x, y: 1.0, [(9, 0)], [0.0])
    with pytest.raises(ConfigurationError):
        Problem(g, lambda x, y: 1.0, [(0, 0)], [np.inf])
    with pytest.raises(ConfigurationError):
        Problem(g, lambda x, y: 0 * x, [(0, 0)], [0.0]).speed_values()
    with pytest.raises(ConfigurationError):
        build_problem("constant", 4, exits="corners")
