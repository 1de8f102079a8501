import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Optional, Tuple, Union

import numpy as np
from scipy.integrate import quad
from scipy.special import hyp2f1

from liouville_fbm._core.configuration import get_settings
from liouville_fbm._core.errors import NotPositiveSemidefiniteError
from liouville_fbm._fbm.hurst import BetaLike, HurstOrder
from liouville_fbm._frac.time_grid import TimeGrid
from liouville_fbm._utilities.numerics import loglog_fit

logger = logging.getLogger(__name__)


class CovarianceKind(str, Enum):
    LIOUVILLE = "liouville"
    CLASSICAL = "classical"


class Normalization(str, Enum):
    UNHALVED = "unhalved"
    CONVENTIONAL = "conventional"


def _check_times(s: float, t: float) -> None:
    if s < 0 or t < 0:
        raise ValueError(f"times must be >= 0, got s={s}, t={t}")


def cov_liouville(s: float, t: float, beta: BetaLike, tolerance: Optional[float] = None) -> float:
    """
    ``Gamma(beta+1/2)**-2 * int_0^{s^t} (s-u)**(beta-1/2) (t-u)**(beta-1/2) du``
    by adaptive quadrature. After ``v = s^t - u`` the endpoint singularity
    ``v**(beta-1/2)`` is carried by an algebraic weight.
    """
    _check_times(s, t)
    order = HurstOrder.of(beta)
    m, M = min(s, t), max(s, t)
    if m == 0.0:
        return 0.0
    if order.is_brownian:
        return float(m)
    tol = get_settings().quad_tolerance if tolerance is None else tolerance
    a = order.exponent
    gap = M - m
    if gap == 0.0:
        value, _ = quad(lambda v: 1.0, 0.0, m, weight="alg", wvar=(2.0 * a, 0.0), epsabs=tol, epsrel=tol, limit=200)
    else:
        value, _ = quad(lambda v: (gap + v) ** a, 0.0, m, weight="alg", wvar=(a, 0.0), epsabs=tol, epsrel=tol, limit=200)
    return float(value) / order.kernel_gamma**2


def cov_liouville_closed(s, t, beta: BetaLike) -> np.ndarray:
    """
    Vectorized closed form of the Liouville covariance,
    ``m**(a+1) M**a 2F1(-a, 1; a+2; m/M) / ((a+1) Gamma(beta+1/2)**2)``
    with ``a = beta - 1/2``, ``m = min(s, t)``, ``M = max(s, t)``.
    """
    order = HurstOrder.of(beta)
    s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
    if np.any(s < 0) or np.any(t < 0):
        raise ValueError("times must be >= 0")
    m, M = np.minimum(s, t), np.maximum(s, t)
    if order.is_brownian:
        return m.copy()
    a = order.exponent
    out = np.zeros(m.shape)
    positive = m > 0
    diagonal = positive & (m == M)
    off = positive & ~diagonal
    out[diagonal] = m[diagonal] ** (2.0 * order.beta) * order.variance_constant()
    mo, Mo = m[off], M[off]
    out[off] = mo ** (a + 1.0) * Mo**a * hyp2f1(-a, 1.0, a + 2.0, mo / Mo) / ((a + 1.0) * order.kernel_gamma**2)
    return out


def cov_classical(s: float, t: float, beta: BetaLike, normalization: Union[Normalization, str] = Normalization.UNHALVED) -> float:
    """
    ``s**(2 beta) + t**(2 beta) - |t-s|**(2 beta)``; the conventional
    normalization multiplies by one half.
    """
    _check_times(s, t)
    two_beta = 2.0 * HurstOrder.of(beta).beta
    value = s**two_beta + t**two_beta - abs(t - s) ** two_beta
    return 0.5 * value if Normalization(normalization) is Normalization.CONVENTIONAL else value


def cov_classical_matrix(times, beta: BetaLike, normalization: Union[Normalization, str] = Normalization.UNHALVED) -> np.ndarray:
    times = np.asarray(times, dtype=float)
    two_beta = 2.0 * HurstOrder.of(beta).beta
    s, t = np.meshgrid(times, times, indexing="ij")
    value = s**two_beta + t**two_beta - np.abs(t - s) ** two_beta
    return 0.5 * value if Normalization(normalization) is Normalization.CONVENTIONAL else value


@lru_cache(maxsize=32)
def unit_liouville_matrix(n_cells: int, beta: float) -> np.ndarray:
    """Liouville covariance on the integer nodes ``0..n_cells``."""
    k = np.arange(n_cells + 1, dtype=float)
    out = cov_liouville_closed(k[:, None], k[None, :], beta)
    out = 0.5 * (out + out.T)
    out.setflags(write=False)
    return out


def liouville_node_matrix(grid: TimeGrid, beta: BetaLike) -> np.ndarray:
    """
    Covariance on all nodes ``t_0 .. t_n`` of a grid starting at 0, built
    from the unit-spacing matrix by self-similarity.
    """
    order = HurstOrder.of(beta)
    if grid.t_start != 0.0:
        return cov_liouville_closed(grid.nodes()[:, None], grid.nodes()[None, :], order)
    return grid.delta ** (2.0 * order.beta) * unit_liouville_matrix(grid.n_cells, order.beta)


@dataclass(frozen=True, eq=False)
class CovMatrix:
    """Covariance of ``(W(t_1), ..., W(t_n))`` on the right nodes of a grid."""

    grid: TimeGrid
    beta: HurstOrder
    kind: CovarianceKind
    entries: np.ndarray
    normalization: Normalization = Normalization.UNHALVED

    @classmethod
    def build(
        cls,
        grid: TimeGrid,
        beta: BetaLike,
        kind: Union[CovarianceKind, str] = CovarianceKind.LIOUVILLE,
        normalization: Union[Normalization, str] = Normalization.UNHALVED,
    ) -> "CovMatrix":
        order = HurstOrder.of(beta)
        kind = CovarianceKind(kind)
        if kind is CovarianceKind.LIOUVILLE:
            entries = np.array(liouville_node_matrix(grid, order)[1:, 1:])
        else:
            entries = cov_classical_matrix(grid.right_nodes(), order, normalization)
        entries = 0.5 * (entries + entries.T)
        return cls(grid=grid, beta=order, kind=kind, entries=entries, normalization=Normalization(normalization))

    def cholesky(self, jitter_tolerance: Optional[float] = None) -> Tuple[np.ndarray, float]:
        """
        Lower Cholesky factor and the jitter that was added to the diagonal.
        Jitter grows geometrically up to ``jitter_tolerance * max diagonal``.
        """
        tolerance = get_settings().jitter_tolerance if jitter_tolerance is None else jitter_tolerance
        scale = float(np.max(np.diag(self.entries)))
        try:
            return np.linalg.cholesky(self.entries), 0.0
        except np.linalg.LinAlgError:
            pass
        jitter = 1e-16 * scale
        identity = np.eye(self.entries.shape[0])
        while jitter <= tolerance * scale * (1.0 + 1e-9):
            try:
                factor = np.linalg.cholesky(self.entries + jitter * identity)
                logger.warning("Cholesky of %s covariance (beta=%s, n=%d) needed jitter %.3e",
                               self.kind.value, self.beta.beta, self.grid.n_cells, jitter)
                return factor, jitter
            except np.linalg.LinAlgError:
                jitter *= 10.0
        raise NotPositiveSemidefiniteError(
            f"{self.kind.value} covariance (beta={self.beta.beta}, n={self.grid.n_cells}) "
            f"is not positive semidefinite within jitter {tolerance:.1e} x max diagonal"
        )


def increment_variance(cov: CovMatrix, i: int, j: int) -> float:
    """``E|W(t_i) - W(t_j)|**2`` for right-node indices (``0`` means ``t_1``)."""
    c = cov.entries
    return float(c[i, i] + c[j, j] - 2.0 * c[i, j])


def increment_exponent(cov: CovMatrix, lag_range: Tuple[float, float] = (2.0**-10, 2.0**-4)) -> float:
    """
    Log-log slope of ``h -> E|W(T) - W(T-h)|**2`` over lags that are grid
    multiples inside ``lag_range * T``.
    """
    grid = cov.grid
    last = grid.n_cells - 1
    lags, values = [], []
    for k in range(1, grid.n_cells):
        h = k * grid.delta
        if lag_range[0] * grid.length - 1e-15 <= h <= lag_range[1] * grid.length + 1e-15:
            lags.append(h)
            values.append(increment_variance(cov, last, last - k))
    slope, _ = loglog_fit(lags, values)
    return slope
