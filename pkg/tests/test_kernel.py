import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.special import gamma

from liouville_fbm._core.errors import GridMismatchError
from liouville_fbm._frac.kernel import (
    Side,
    apply,
    build_kernel,
    compose,
    h_norm,
    norm_ratio_bracket,
    reconstruction_error,
    solve_derivative,
)
from liouville_fbm._frac.step_function import StepFunction
from liouville_fbm._frac.time_grid import TimeGrid
from liouville_fbm._utilities.numerics import loglog_fit


@pytest.mark.parametrize('alpha', [0.1, 0.5, 0.9])
def test_power_rule_is_exact_on_constants(alpha):
    grid = TimeGrid(t_end=2.0, n_cells=64)
    ones = StepFunction.constant(grid)
    left = apply(build_kernel(grid, alpha, Side.LEFT), ones)
    np.testing.assert_allclose(left, grid.right_nodes() ** alpha / gamma(alpha + 1), rtol=1e-12)
    right = apply(build_kernel(grid, alpha, Side.RIGHT), ones)
    np.testing.assert_allclose(right, (2.0 - grid.left_nodes()) ** alpha / gamma(alpha + 1), rtol=1e-12)


def test_evaluation_nodes_follow_the_side():
    grid = TimeGrid(n_cells=4)
    np.testing.assert_array_equal(build_kernel(grid, 0.3, 'left').evaluation_nodes(), grid.right_nodes())
    np.testing.assert_array_equal(build_kernel(grid, 0.3, 'right').evaluation_nodes(), grid.left_nodes())


@pytest.mark.parametrize('alpha', [0.0, 1.0, -0.2])
def test_order_outside_unit_interval_is_rejected(alpha):
    with pytest.raises(ValueError):
        build_kernel(TimeGrid(n_cells=4), alpha)


def test_grid_mismatch():
    K = build_kernel(TimeGrid(n_cells=8), 0.3)
    with pytest.raises(GridMismatchError):
        apply(K, StepFunction.constant(TimeGrid(n_cells=4)))
    with pytest.raises(GridMismatchError):
        solve_derivative(K, np.ones(5))


@settings(max_examples=30, deadline=None)
@given(
    alpha=st.floats(0.05, 0.95),
    values=arrays(np.float64, 32, elements=st.floats(-10.0, 10.0)),
    side=st.sampled_from(['left', 'right']),
)
def test_derivative_inverts_integral(alpha, values, side):
    grid = TimeGrid(n_cells=32)
    f = StepFunction(grid, values)
    K = build_kernel(grid, alpha, side)
    recovered = solve_derivative(K, apply(K, f))
    np.testing.assert_allclose(recovered.values, f.values, atol=1e-8 * max(1.0, np.max(np.abs(values))))


def test_right_integral_is_the_reflected_left_integral():
    grid = TimeGrid(n_cells=50)
    rng = np.random.default_rng(3)
    f = StepFunction(grid, rng.standard_normal(50))
    right = apply(build_kernel(grid, 0.35, Side.RIGHT), f)
    mirrored = apply(build_kernel(grid, 0.35, Side.LEFT), f.reverse())[::-1]
    np.testing.assert_allclose(right, mirrored, rtol=1e-13, atol=1e-14)


def test_semigroup_holds_up_to_quadrature_error():
    errors = []
    for n in (128, 256):
        grid = TimeGrid(n_cells=n)
        ones = StepFunction.constant(grid)
        composed = compose(0.2, 0.3, ones)
        direct = apply(build_kernel(grid, 0.5, Side.LEFT), ones)
        errors.append(np.max(np.abs(composed - direct)))
    assert errors[1] < errors[0] < 1e-2


def test_h_norm_orders():
    grid = TimeGrid(n_cells=32)
    f = StepFunction.constant(grid, 2.0)
    assert h_norm(f, 0.0) == pytest.approx(2.0)
    image = apply(build_kernel(grid, 0.4, Side.LEFT), f)
    assert h_norm(f, -0.4) == pytest.approx(np.sqrt(grid.delta * np.sum(image**2)))
    assert h_norm(f, 0.4, 'right') > 0
    with pytest.raises(ValueError):
        h_norm(f, 1.0)


@pytest.mark.parametrize('alpha', [0.1, 0.25, 0.4])
def test_indicator_reconstruction_converges(alpha):
    cells = [64, 128, 256, 512, 1024]
    errors = [reconstruction_error(TimeGrid(n_cells=n), alpha, 0.5) for n in cells]
    assert all(b < a for a, b in zip(errors, errors[1:]))
    slope, _ = loglog_fit(cells, errors)
    assert -slope >= 0.4


def test_left_right_bracket():
    grid = TimeGrid(n_cells=64)
    samples = np.random.default_rng(0).standard_normal((20, 64))
    low, high = norm_ratio_bracket(grid, 0.25, samples)
    assert 0 < low <= high < np.inf
    with pytest.raises(ValueError):
        norm_ratio_bracket(grid, 0.5, samples)
