import math

import numpy as np
import pytest
from scipy.special import rgamma

from liouville_fbm._frac.time_grid import TimeGrid
from liouville_fbm._spde.mode_kernel import ModeKernel, mittag_leffler, mode_variance


def _series(y: float, mu: float, terms: int = 80) -> float:
    return sum((-y) ** k * rgamma(k + mu) for k in range(terms))


def test_exponential_case():
    y = np.linspace(0.0, 50.0, 11)
    np.testing.assert_allclose(mittag_leffler(y, 1.0), np.exp(-y), rtol=1e-14)


@pytest.mark.parametrize('mu', [0.6, 0.8, 1.2, 1.8])
@pytest.mark.parametrize('y', [0.1, 1.0, 3.0])
def test_matches_power_series(mu, y):
    assert float(mittag_leffler(y, mu)) == pytest.approx(_series(y, mu), rel=1e-8, abs=1e-12)


@pytest.mark.parametrize('mu', [0.8, 1.2])
def test_continuous_at_the_asymptotic_switch(mu):
    below, above = mittag_leffler([29.999, 30.001], mu)
    assert above == pytest.approx(below, rel=1e-4)


def test_invalid_arguments():
    with pytest.raises(ValueError):
        mittag_leffler(-1.0, 0.8)
    with pytest.raises(ValueError):
        mittag_leffler(1.0, 2.5)
    with pytest.raises(ValueError):
        mode_variance(0.0, 1.0, 0.3)
    with pytest.raises(ValueError):
        mode_variance(1.0, -1.0, 0.3)
    with pytest.raises(ValueError):
        mode_variance(1.0, 1.0, 0.3, method="spline")


@pytest.mark.parametrize('lam', [1.0, math.pi**2, 100.0])
def test_brownian_modes_are_ornstein_uhlenbeck(lam):
    t = 0.7
    assert mode_variance(lam, t, 0.5) == pytest.approx((1 - math.exp(-2 * lam * t)) / (2 * lam), rel=1e-10)


@pytest.mark.parametrize('beta,rel', [(0.3, 1e-3), (0.5, 1e-8), (0.7, 1e-2)])
def test_stationary_limit(beta, rel):
    kernel = ModeKernel(4.0, beta)
    assert mode_variance(4.0, 100.0, beta) == pytest.approx(kernel.stationary_variance(), rel=rel)


def test_zero_time_has_no_variance():
    assert mode_variance(3.0, 0.0, 0.3) == 0.0


@pytest.mark.parametrize('beta', [0.3, 0.7])
def test_kernel_and_gram_methods_agree(beta):
    lam = math.pi**2
    assert mode_variance(lam, 1.0, beta, method="gram") == pytest.approx(
        mode_variance(lam, 1.0, beta), rel=1e-2
    )


@pytest.mark.parametrize('beta', [0.3, 0.5, 0.8])
def test_moving_average_weights_carry_the_variance(beta):
    grid = TimeGrid(n_cells=32)
    kernel = ModeKernel(math.pi**2, beta)
    weights = kernel.moving_average_weights(grid)
    assert np.sum(weights**2) == pytest.approx(kernel.variance(1.0), rel=1e-6)
    assert np.sum(weights[:16] ** 2) == pytest.approx(kernel.variance(0.5), rel=1e-6)
