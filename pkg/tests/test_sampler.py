import numpy as np
import pytest

from liouville_fbm._fbm.covariance import CovMatrix
from liouville_fbm._fbm.ensemble import Scheme
from liouville_fbm._fbm.sampler import (
    moving_average_covariance,
    moving_average_increment_covariance,
    sample_cholesky,
    sample_moving_average,
    sample_paths,
)
from liouville_fbm._frac.time_grid import TimeGrid
from liouville_fbm._integral.estimate import McEstimate
from liouville_fbm._integral.transform import indicator_gram

GRID = TimeGrid(n_cells=16)


def test_paths_start_at_zero_and_are_read_only():
    ensemble = sample_paths(GRID, 0.3, 'cholesky', 50, 1)
    assert ensemble.values.shape == (50, 17)
    assert np.all(ensemble.values[:, 0] == 0.0)
    with pytest.raises(ValueError):
        ensemble.values[0, 1] = 1.0


@pytest.mark.parametrize('scheme', ['cholesky', 'moving_average'])
def test_same_seed_same_paths(scheme):
    a = sample_paths(GRID, 0.7, scheme, 20, 123)
    b = sample_paths(GRID, 0.7, scheme, 20, 123)
    np.testing.assert_array_equal(a.values, b.values)
    c = sample_paths(GRID, 0.7, scheme, 20, 123, coordinate=1)
    assert not np.allclose(a.values, c.values)


def test_paths_do_not_depend_on_ensemble_size():
    small = sample_paths(GRID, 0.4, Scheme.CHOLESKY, 10, 9)
    large = sample_paths(GRID, 0.4, Scheme.CHOLESKY, 30, 9)
    np.testing.assert_array_equal(small.values, large.values[:10])


@pytest.mark.parametrize('beta', [0.25, 0.75])
def test_moving_average_marginals_are_exact(beta):
    cov = CovMatrix.build(GRID, beta)
    np.testing.assert_allclose(np.diag(moving_average_covariance(GRID, beta)), np.diag(cov.entries), rtol=1e-12)


def test_moving_average_is_a_random_walk_at_one_half():
    t = GRID.right_nodes()
    np.testing.assert_allclose(moving_average_covariance(GRID, 0.5), np.minimum.outer(t, t), atol=1e-14)


def test_moving_average_rejects_classical():
    with pytest.raises(ValueError):
        sample_paths(GRID, 0.3, 'moving_average', 10, 0, kind='classical')


@pytest.mark.parametrize('beta', [0.3, 0.75])
def test_terminal_variance_within_four_standard_errors(beta):
    ensemble = sample_paths(GRID, beta, 'cholesky', 4000, 2024)
    oracle = CovMatrix.build(GRID, beta).entries[-1, -1]
    estimate = McEstimate.from_samples(ensemble.values[:, -1])
    assert abs(estimate.variance_z(oracle)) <= 4.0
    assert abs(estimate.mean_z(0.0)) <= 4.0


def test_cross_scheme_terminal_variances_agree():
    chol = McEstimate.from_samples(sample_paths(GRID, 0.75, 'cholesky', 4000, 5).values[:, -1])
    ma = McEstimate.from_samples(sample_moving_average(GRID, 0.75, 4000, 5, coordinate=1).values[:, -1])
    se = np.hypot(chol.variance_std_error, ma.variance_std_error)
    assert abs(chol.variance - ma.variance) <= 4.0 * se


def test_moment_summary_and_long_frame():
    ensemble = sample_paths(GRID, 0.5, 'moving_average', 100, 3)
    summary = ensemble.moment_summary()
    assert list(summary.columns) == ['t', 'mean', 'variance', 'skewness', 'excess_kurtosis']
    assert len(summary) == 16
    frame = ensemble.to_frame()
    assert len(frame) == 100 * 17
    assert ensemble.summary()['scheme'] == 'moving_average'


@pytest.mark.parametrize('sampler', [sample_cholesky, sample_moving_average])
def test_samplers_reject_grids_away_from_zero(sampler):
    with pytest.raises(ValueError):
        sampler(TimeGrid(t_start=0.5, t_end=1.5, n_cells=8), 0.3, n_paths=4, master_seed=0)


def test_moving_average_increment_law_sums_to_the_node_law():
    M = moving_average_increment_covariance(GRID, 0.3)
    S = np.tril(np.ones((GRID.n_cells, GRID.n_cells)))
    np.testing.assert_allclose(S @ M @ S.T, moving_average_covariance(GRID, 0.3), rtol=1e-12, atol=1e-14)
    np.testing.assert_allclose(moving_average_increment_covariance(GRID, 0.5), GRID.delta * np.eye(GRID.n_cells),
                               atol=1e-14)


@pytest.mark.parametrize('beta', [0.1, 0.9])
def test_moving_average_increments_follow_their_own_law(beta):
    grid = TimeGrid(n_cells=64)
    c = np.random.default_rng(11).standard_normal(grid.n_cells)
    outcomes = sample_moving_average(grid, beta, 20000, 1).increments() @ c
    own = float(c @ moving_average_increment_covariance(grid, beta) @ c)
    estimate = McEstimate.from_samples(outcomes)
    assert abs(estimate.variance_z(own)) <= 4.0
    assert not np.allclose(moving_average_increment_covariance(grid, beta), indicator_gram(grid, beta), rtol=1e-3)
