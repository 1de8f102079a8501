import numpy as np
import pytest

from liouville_fbm._core.errors import ThresholdViolationError
from liouville_fbm._frac.time_grid import TimeGrid
from liouville_fbm._spde.galerkin_model import GalerkinModel
from liouville_fbm._spde.mild_solution import simulate_mild
from liouville_fbm._spde.regularity import (
    LatticePoint,
    RegularityEstimate,
    monotone_in_beta,
    monotone_in_theta,
    regularity_estimate,
    regularity_lattice,
    structure_lags,
)


def _point(beta, theta, estimate):
    if estimate is None:
        return LatticePoint(beta=beta, theta=theta)
    result = RegularityEstimate(beta=beta, theta=theta, d=1, lags=[], structure=[],
                                raw_slope=2 * estimate, slope=2 * estimate)
    return LatticePoint(beta=beta, theta=theta, result=result)


def test_structure_lags():
    np.testing.assert_array_equal(structure_lags(TimeGrid(n_cells=256)), np.arange(1, 17))
    assert structure_lags(TimeGrid(n_cells=16)).size == 1


@pytest.mark.slow
def test_brownian_heat_equation_has_quarter_regularity():
    paths = simulate_mild(GalerkinModel(K=64), TimeGrid(n_cells=256), 0.5, 200, 5)
    result = regularity_estimate(paths)
    assert result.target == 0.25
    assert result.passes
    assert result.estimate == pytest.approx(0.25, abs=0.1)


@pytest.mark.slow
def test_regularity_lattice_is_monotone_in_beta_and_theta():
    grid = TimeGrid(n_cells=256)
    model = GalerkinModel(K=64)
    paths = {beta: simulate_mild(model, grid, beta, 400, seed) for beta, seed in ((0.5, 5), (0.75, 6))}
    points = regularity_lattice(paths, [0.1, 0.0])
    assert [(p.beta, p.theta) for p in points] == [(0.5, 0.0), (0.5, 0.1), (0.75, 0.0), (0.75, 0.1)]
    assert all(p.finite and p.result.passes for p in points)
    assert monotone_in_theta(points) is True
    assert monotone_in_beta(points) is True


def test_monotone_verdicts_on_a_synthetic_lattice():
    points = [_point(0.5, 0.0, 0.25), _point(0.5, 0.1, 0.15), _point(0.75, 0.0, 0.5), _point(0.75, 0.1, 0.4)]
    assert monotone_in_theta(points) is True
    assert monotone_in_beta(points) is True
    flipped = points[:3] + [_point(0.75, 0.1, 0.1)]
    assert monotone_in_theta(flipped) is True
    assert monotone_in_beta(flipped) is False
    assert monotone_in_beta([_point(0.5, 0.0, 0.25), _point(0.75, 0.0, None)]) is None


def test_lattice_marks_divergent_cells():
    paths = {0.2: simulate_mild(GalerkinModel(K=4), TimeGrid(n_cells=64), 0.2, 4, 0)}
    (point,) = regularity_lattice(paths, [0.0])
    assert not point.finite


def test_divergent_norm_is_refused():
    paths = simulate_mild(GalerkinModel(K=4), TimeGrid(n_cells=64), 0.2, 4, 0)
    with pytest.raises(ThresholdViolationError):
        regularity_estimate(paths)


def test_needs_two_lags():
    paths = simulate_mild(GalerkinModel(K=4), TimeGrid(n_cells=16), 0.6, 4, 0)
    with pytest.raises(ValueError):
        regularity_estimate(paths)
