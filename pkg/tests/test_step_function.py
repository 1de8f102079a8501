import numpy as np
import pytest

from liouville_fbm._core.errors import GridMismatchError
from liouville_fbm._frac.step_function import (
    StepFunction,
    exponential_averages,
    node_frame,
    singular_power_averages,
)
from liouville_fbm._frac.time_grid import TimeGrid


def test_grid_nodes_and_refinement():
    grid = TimeGrid(t_end=2.0, n_cells=4)
    np.testing.assert_allclose(grid.nodes(), [0.0, 0.5, 1.0, 1.5, 2.0])
    assert grid.nodes()[-1] == 2.0
    assert grid.refine(2).n_cells == 8
    assert grid.restrict(2).t_end == pytest.approx(1.0)
    assert grid.extend(2).t_end == pytest.approx(3.0)
    assert grid.node_index(1.5) == 3
    with pytest.raises(ValueError):
        grid.node_index(0.7)


def test_step_functions_are_built_from_closed_forms_only():
    assert not hasattr(StepFunction, "from_callable")
    assert not hasattr(TimeGrid, "midpoints")


def test_grid_validation():
    with pytest.raises(ValueError):
        TimeGrid(t_start=1.0, t_end=1.0, n_cells=4)
    with pytest.raises(ValueError):
        TimeGrid(n_cells=0)


def test_indicator_cells():
    grid = TimeGrid(n_cells=4)
    f = StepFunction.indicator(grid, 0.25, 0.75)
    np.testing.assert_array_equal(f.values, [0.0, 1.0, 1.0, 0.0])
    with pytest.raises(ValueError):
        StepFunction.indicator(grid, 0.5, 0.5)


def test_values_are_read_only_and_sized():
    grid = TimeGrid(n_cells=3)
    f = StepFunction(grid, [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        f.values[0] = 5.0
    with pytest.raises(ValueError):
        StepFunction(grid, [1.0, 2.0])


def test_arithmetic_requires_same_grid():
    a = StepFunction.constant(TimeGrid(n_cells=3), 2.0)
    b = StepFunction.constant(TimeGrid(n_cells=4), 1.0)
    with pytest.raises(GridMismatchError):
        a + b
    np.testing.assert_array_equal((a - 0.5 * a).values, [1.0, 1.0, 1.0])
    np.testing.assert_array_equal((-a).values, [-2.0, -2.0, -2.0])


def test_reverse_restrict_extend():
    grid = TimeGrid(n_cells=4)
    f = StepFunction(grid, [1.0, 2.0, 3.0, 4.0])
    np.testing.assert_array_equal(f.reverse().values, [4.0, 3.0, 2.0, 1.0])
    assert f.restrict(2).grid.t_end == pytest.approx(0.5)
    extended = f.extend(2)
    np.testing.assert_array_equal(extended.values[-2:], [0.0, 0.0])
    assert extended.grid.n_cells == 6


def test_l2_norm():
    f = StepFunction(TimeGrid(n_cells=4), [1.0, -1.0, 1.0, -1.0])
    assert f.l2_norm() == pytest.approx(1.0)


def test_antiderivative_gives_exact_averages():
    grid = TimeGrid(n_cells=8)
    f = StepFunction.from_antiderivative(grid, lambda t: t**3 / 3.0)
    nodes = grid.nodes()
    expected = (nodes[1:] ** 3 - nodes[:-1] ** 3) / (3.0 * grid.delta)
    np.testing.assert_allclose(f.values, expected, rtol=1e-14)


def test_singular_power_averages_integrate_exactly():
    grid = TimeGrid(n_cells=16)
    alpha, y = 0.4, 0.5
    f = singular_power_averages(grid, y, alpha)
    total = grid.delta * f.values.sum()
    assert total == pytest.approx(y ** (1 - alpha) / (1 - alpha), rel=1e-12)
    assert np.all(f.values[grid.node_index(y):] == 0.0)


def test_exponential_averages_integrate_exactly():
    grid = TimeGrid(n_cells=10)
    rate = 3.0
    f = exponential_averages(grid, rate, 1.0)
    assert grid.delta * f.values.sum() == pytest.approx((1 - np.exp(-rate)) / rate, rel=1e-12)


def test_dict_round_trip_and_frames():
    grid = TimeGrid(t_start=0.5, t_end=1.5, n_cells=2)
    f = StepFunction(grid, [0.25, -1.0])
    again = StepFunction.from_dict(f.to_dict())
    assert again.grid == grid
    np.testing.assert_array_equal(again.values, f.values)
    assert list(f.to_frame().columns) == ['t', 'value']
    assert len(node_frame(grid, [1.0, 2.0])) == 2
