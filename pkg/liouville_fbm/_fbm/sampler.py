import logging
from typing import Optional, Union

import numpy as np
from scipy.linalg import toeplitz

from liouville_fbm._core.configuration import get_settings
from liouville_fbm._fbm.covariance import CovarianceKind, CovMatrix, Normalization
from liouville_fbm._fbm.ensemble import PathEnsemble, Scheme
from liouville_fbm._fbm.hurst import BetaLike, HurstOrder
from liouville_fbm._frac.time_grid import TimeGrid
from liouville_fbm._lmt.activity import Activity
from liouville_fbm._utilities.numerics import ordered_map
from liouville_fbm._utilities.seed_service import SeedService

logger = logging.getLogger(__name__)

CHUNK_PATHS = 2048


def path_normals(master_seed: int, coordinate: int, n_paths: int, n_cells: int, workers: Optional[int] = None) -> np.ndarray:
    """Standard normals, row ``r`` drawn from stream ``(master_seed, coordinate, r)``."""
    workers = get_settings().workers if workers is None else workers
    starts = list(range(0, n_paths, CHUNK_PATHS))

    def chunk(start: int) -> np.ndarray:
        stop = min(start + CHUNK_PATHS, n_paths)
        return np.stack([
            SeedService.generator(master_seed, coordinate, r).standard_normal(n_cells)
            for r in range(start, stop)
        ])

    return np.concatenate(ordered_map(chunk, starts, workers), axis=0)


def _require_origin(grid: TimeGrid) -> None:
    if grid.t_start != 0.0:
        raise ValueError("fBm paths are sampled on grids starting at 0")


def _with_origin(values: np.ndarray) -> np.ndarray:
    return np.concatenate([np.zeros((values.shape[0], 1)), values], axis=1)


def sample_cholesky(
    grid: TimeGrid,
    beta: BetaLike,
    kind: Union[CovarianceKind, str] = CovarianceKind.LIOUVILLE,
    n_paths: int = 1000,
    master_seed: int = 0,
    normalization: Union[Normalization, str] = Normalization.UNHALVED,
    coordinate: int = 0,
    factor: Optional[np.ndarray] = None,
) -> PathEnsemble:
    """Exact Gaussian sampling from the covariance on the right nodes."""
    _require_origin(grid)
    order = HurstOrder.of(beta)
    kind = CovarianceKind(kind)
    with Activity("fbm.sample_cholesky", {"beta": order.beta, "n_cells": grid.n_cells, "n_paths": n_paths}):
        if factor is None:
            factor, _ = CovMatrix.build(grid, order, kind, normalization).cholesky()
        z = path_normals(master_seed, coordinate, n_paths, grid.n_cells)
        values = _with_origin(z @ factor.T)
    return PathEnsemble(grid=grid, beta=order, values=values, master_seed=master_seed,
                        scheme=Scheme.CHOLESKY, kind=kind.value, coordinate=coordinate)


def moving_average_weights(grid: TimeGrid, beta: BetaLike) -> np.ndarray:
    """
    ``A_p = sqrt(int_{p delta}^{(p+1) delta} x**(2 beta - 1) dx) / Gamma(beta + 1/2)``:
    the root mean square of the Liouville kernel over one cell at lag ``p``.
    """
    order = HurstOrder.of(beta)
    p = np.arange(grid.n_cells, dtype=float)
    two_beta = 2.0 * order.beta
    squared = grid.delta**two_beta * ((p + 1.0) ** two_beta - p**two_beta) * order.variance_constant()
    return np.sqrt(squared)


def moving_average_covariance(grid: TimeGrid, beta: BetaLike) -> np.ndarray:
    A = moving_average_weights(grid, beta)
    T = toeplitz(A, np.zeros_like(A))
    return T @ T.T


def moving_average_increment_covariance(grid: TimeGrid, beta: BetaLike) -> np.ndarray:
    """
    Covariance of the cell increments ``W(t_i) - W(t_{i-1})`` under the
    moving-average law: ``(D T)(D T)^T`` with ``T`` the lower Toeplitz
    matrix of weights and ``D`` the first difference. Only the diagonal of
    ``T T^T`` matches the Liouville covariance, so this is the oracle for
    moving-average ensembles.
    """
    A = moving_average_weights(grid, beta)
    DT = np.diff(toeplitz(A, np.zeros_like(A)), axis=0, prepend=0.0)
    return DT @ DT.T


def sample_moving_average(
    grid: TimeGrid,
    beta: BetaLike,
    n_paths: int = 1000,
    master_seed: int = 0,
    coordinate: int = 0,
) -> PathEnsemble:
    """
    ``W(t_i) = sum_{j <= i} A_{i-j} xi_j``. The marginal variance at every
    node matches the Liouville covariance exactly; at beta = 1/2 this is a
    random walk with step variance ``delta``.
    """
    _require_origin(grid)
    order = HurstOrder.of(beta)
    with Activity("fbm.sample_moving_average", {"beta": order.beta, "n_cells": grid.n_cells, "n_paths": n_paths}):
        A = moving_average_weights(grid, order)
        T = toeplitz(A, np.zeros_like(A))
        xi = path_normals(master_seed, coordinate, n_paths, grid.n_cells)
        values = _with_origin(xi @ T.T)
    return PathEnsemble(grid=grid, beta=order, values=values, master_seed=master_seed,
                        scheme=Scheme.MOVING_AVERAGE, coordinate=coordinate)


def sample_paths(
    grid: TimeGrid,
    beta: BetaLike,
    scheme: Union[Scheme, str],
    n_paths: int,
    master_seed: int,
    coordinate: int = 0,
    kind: Union[CovarianceKind, str] = CovarianceKind.LIOUVILLE,
    factor: Optional[np.ndarray] = None,
    normalization: Union[Normalization, str] = Normalization.UNHALVED,
) -> PathEnsemble:
    scheme = Scheme(scheme)
    if scheme is Scheme.CHOLESKY:
        return sample_cholesky(grid, beta, kind, n_paths, master_seed, normalization, coordinate, factor)
    if CovarianceKind(kind) is not CovarianceKind.LIOUVILLE:
        raise ValueError("the moving-average scheme samples Liouville fBm only")
    return sample_moving_average(grid, beta, n_paths, master_seed, coordinate=coordinate)
