import numpy as np
import pytest
from scipy.special import gamma

from liouville_fbm._core.errors import NotPositiveSemidefiniteError
from liouville_fbm._fbm.covariance import (
    CovarianceKind,
    CovMatrix,
    Normalization,
    cov_classical,
    cov_liouville,
    cov_liouville_closed,
    increment_exponent,
)
from liouville_fbm._fbm.hurst import HurstOrder, Regime
from liouville_fbm._frac.time_grid import TimeGrid


def test_hurst_order_regimes():
    assert HurstOrder.of(0.3).regime is Regime.BELOW_HALF
    assert HurstOrder.of(0.5).regime is Regime.BROWNIAN
    assert HurstOrder.of(0.8).regime is Regime.ABOVE_HALF
    assert HurstOrder.of(0.5).variance_constant() == pytest.approx(1.0)
    with pytest.raises(ValueError):
        HurstOrder.of(1.0)


def test_brownian_reduction_on_256_nodes():
    grid = TimeGrid(n_cells=256)
    cov = CovMatrix.build(grid, 0.5)
    t = grid.right_nodes()
    np.testing.assert_allclose(cov.entries, np.minimum.outer(t, t), atol=1e-12)
    assert cov_liouville(0.3, 0.7, 0.5) == pytest.approx(0.3, abs=1e-12)


@pytest.mark.parametrize('beta', [0.1, 0.3, 0.7, 0.9])
def test_closed_form_matches_quadrature(beta):
    for s, t in [(0.2, 0.9), (0.5, 0.5), (1.0, 0.05)]:
        assert float(cov_liouville_closed(s, t, beta)) == pytest.approx(cov_liouville(s, t, beta), rel=1e-8)


@pytest.mark.parametrize('beta', [0.2, 0.75])
def test_variance_and_scaling(beta):
    order = HurstOrder.of(beta)
    t = 1.7
    expected = t ** (2 * beta) / (2 * beta * gamma(beta + 0.5) ** 2)
    assert cov_liouville(t, t, beta) == pytest.approx(expected, rel=1e-9)
    c = 3.0
    assert cov_liouville(c * 0.4, c * 0.9, order) == pytest.approx(
        c ** (2 * beta) * cov_liouville(0.4, 0.9, order), rel=1e-8
    )


def test_zero_and_negative_times():
    assert cov_liouville(0.0, 0.5, 0.3) == 0.0
    with pytest.raises(ValueError):
        cov_liouville(-0.1, 0.5, 0.3)


def test_classical_normalizations():
    unhalved = cov_classical(0.3, 0.8, 0.4)
    assert cov_classical(0.3, 0.8, 0.4, Normalization.CONVENTIONAL) == pytest.approx(0.5 * unhalved)
    assert cov_classical(0.6, 0.6, 0.5, 'conventional') == pytest.approx(0.6)


def test_cholesky_without_jitter():
    cov = CovMatrix.build(TimeGrid(n_cells=64), 0.3)
    factor, jitter = cov.cholesky()
    assert jitter == 0.0
    np.testing.assert_allclose(factor @ factor.T, cov.entries, atol=1e-12)


def test_classical_matrix_is_factorizable():
    cov = CovMatrix.build(TimeGrid(n_cells=32), 0.8, CovarianceKind.CLASSICAL, 'conventional')
    factor, _ = cov.cholesky()
    assert factor.shape == (32, 32)


def test_indefinite_matrix_raises():
    cov = CovMatrix(grid=TimeGrid(n_cells=2), beta=HurstOrder.of(0.3), kind=CovarianceKind.LIOUVILLE,
                    entries=np.array([[1.0, 2.0], [2.0, 1.0]]))
    with pytest.raises(NotPositiveSemidefiniteError):
        cov.cholesky()


@pytest.mark.parametrize('beta', [0.25, 0.75])
def test_increment_exponent_is_twice_beta(beta):
    cov = CovMatrix.build(TimeGrid(n_cells=1024), beta)
    assert increment_exponent(cov) == pytest.approx(2 * beta, abs=0.05)
