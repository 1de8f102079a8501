import logging
import math
from functools import lru_cache
from typing import Callable, Tuple

import numpy as np
from scipy.special import rgamma, roots_jacobi, roots_legendre

from liouville_fbm._fbm.hurst import BetaLike, HurstOrder
from liouville_fbm._frac.step_function import exponential_averages
from liouville_fbm._frac.time_grid import TimeGrid
from liouville_fbm._integral.isometry import isometry_norm
from liouville_fbm._utilities.numerics import richardson_three_level

logger = logging.getLogger(__name__)

ASYMPTOTIC_SWITCH = 30.0
ASYMPTOTIC_TERMS = 60
JACOBI_POINTS = 64
PANEL_POINTS = 24
UNDER_RESOLVED = 10.0
GRAM_CELLS = 64
GRAM_MAX_CELLS = 512


@lru_cache(maxsize=64)
def _jacobi_rule(n: int, alpha: float, beta: float) -> Tuple[np.ndarray, np.ndarray]:
    return roots_jacobi(n, alpha, beta)


@lru_cache(maxsize=4)
def _legendre_rule(n: int) -> Tuple[np.ndarray, np.ndarray]:
    return roots_legendre(n)


def _ml_integral(y: np.ndarray, mu: float) -> np.ndarray:
    if mu < 1.0:
        # E_{1,mu}(z) = 1/Gamma(mu) + z E_{1,mu+1}(z)
        return rgamma(mu) - y * _ml_integral(y, mu + 1.0)
    # E_{1,mu}(-y) = int_0^1 exp(-y u) (1 - u)**(mu - 2) du / Gamma(mu - 1)
    x, w = _jacobi_rule(JACOBI_POINTS, mu - 2.0, 0.0)
    u = 0.5 * (1.0 + x)
    return 2.0 ** (1.0 - mu) * rgamma(mu - 1.0) * (np.exp(-np.outer(y, u)) @ w)


def _ml_asymptotic(y: np.ndarray, mu: float) -> np.ndarray:
    k = np.arange(1, ASYMPTOTIC_TERMS + 1)
    terms = (-1.0) ** (k + 1) * rgamma(mu - k) * y[:, None] ** (-k[None, :].astype(float))
    # optimal truncation at the smallest term
    stop = np.argmin(np.abs(terms), axis=1)
    keep = k[None, :] <= stop[:, None] + 1
    return np.sum(np.where(keep, terms, 0.0), axis=1)


def mittag_leffler(y, mu: float) -> np.ndarray:
    """
    ``E_{1,mu}(-y) = sum_k (-y)**k / Gamma(k + mu)`` for ``y >= 0`` and
    ``0 < mu < 2``. Gauss-Jacobi quadrature of the integral representation
    up to ``y = 30``, the asymptotic expansion beyond.
    """
    y = np.asarray(y, dtype=float)
    if np.any(y < 0):
        raise ValueError("the Mittag-Leffler kernel is evaluated on the negative axis only")
    if not 0.0 < mu < 2.0:
        raise ValueError(f"mu must lie in (0, 2), got {mu}")
    if abs(mu - 1.0) <= 1e-12:
        return np.exp(-y)
    flat = y.reshape(-1)
    out = np.empty_like(flat)
    small = flat <= ASYMPTOTIC_SWITCH
    if np.any(small):
        out[small] = _ml_integral(flat[small], mu)
    if np.any(~small):
        out[~small] = _ml_asymptotic(flat[~small], mu)
    return out.reshape(y.shape)


def _panel_integrals(lo: np.ndarray, hi: np.ndarray, func: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    x, w = _legendre_rule(PANEL_POINTS)
    half = 0.5 * (hi - lo)
    y = (0.5 * (hi + lo))[:, None] + half[:, None] * x[None, :]
    return half * (func(y) @ w)


def _head_integral(upper: float, power: float, smooth: Callable[[np.ndarray], np.ndarray]) -> float:
    """``int_0^upper y**power smooth(y) dy``: Jacobi rule on ``(0, 1]``, dyadic panels after."""
    c = min(upper, 1.0)
    x, w = _jacobi_rule(JACOBI_POINTS, 0.0, power)
    total = (0.5 * c) ** (power + 1.0) * float(np.dot(w, smooth(0.5 * c * (1.0 + x))))
    if upper > 1.0:
        edges = [1.0]
        while 2.0 * edges[-1] < upper:
            edges.append(2.0 * edges[-1])
        edges.append(upper)
        edges = np.asarray(edges)
        total += float(np.sum(_panel_integrals(edges[:-1], edges[1:], lambda y: y**power * smooth(y))))
    return total


class ModeKernel:
    """
    Regime transform of ``s -> exp(-lam (t - s)) 1_{(0,t)}(s)`` as a
    function of ``x = t - s``:

        G(x) = x**(beta - 1/2) E_{1, beta + 1/2}(-lam x),

    with ``G_lam(x) = lam**(1/2 - beta) G_1(lam x)``. ``Var X(t)`` for the
    mode driven by ``dX = -lam X dt + dW`` is ``int_0^t G(x)**2 dx``.
    """

    def __init__(self, lam: float, beta: BetaLike):
        if lam <= 0:
            raise ValueError(f"mode eigenvalue must be positive, got {lam}")
        self.lam = float(lam)
        self.order = HurstOrder.of(beta)
        self.a = self.order.exponent
        self.mu = self.order.beta + 0.5

    def _unit_kernel(self, y: np.ndarray) -> np.ndarray:
        return mittag_leffler(y, self.mu)

    def _squared_unit(self, y: np.ndarray) -> np.ndarray:
        return mittag_leffler(y, self.mu) ** 2

    def value(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return x**self.a * mittag_leffler(self.lam * x, self.mu)

    def variance(self, t: float) -> float:
        if t == 0:
            return 0.0
        return self.lam ** (-2.0 * self.order.beta) * scaled_variance(self.lam * t, self.order)

    def stationary_variance(self) -> float:
        """``lim_{t -> inf} Var X(t) = lam**(-2 beta) / (2 sin(pi beta))``."""
        return self.lam ** (-2.0 * self.order.beta) / (2.0 * math.sin(math.pi * self.order.beta))

    def cell_integrals(self, grid: TimeGrid) -> Tuple[np.ndarray, np.ndarray]:
        """``(int_cell G**2, int_cell G)`` over the lag cells ``(p delta, (p+1) delta)``."""
        w = self.lam * grid.delta
        squared = np.empty(grid.n_cells)
        plain = np.empty(grid.n_cells)
        squared[0] = _head_integral(w, 2.0 * self.a, self._squared_unit)
        plain[0] = _head_integral(w, self.a, self._unit_kernel)
        if grid.n_cells > 1:
            p = np.arange(1, grid.n_cells, dtype=float)
            lo, hi = p * w, (p + 1.0) * w
            squared[1:] = _panel_integrals(lo, hi, lambda y: y ** (2.0 * self.a) * self._squared_unit(y))
            plain[1:] = _panel_integrals(lo, hi, lambda y: y**self.a * self._unit_kernel(y))
        squared *= self.lam ** (-2.0 * self.order.beta)
        plain *= self.lam ** (-self.order.beta - 0.5)
        return squared, plain

    def moving_average_weights(self, grid: TimeGrid) -> np.ndarray:
        """``sign(int_cell G) sqrt(int_cell G**2)``; their squares sum to the variance at each node."""
        squared, plain = self.cell_integrals(grid)
        return np.where(plain < 0.0, -1.0, 1.0) * np.sqrt(np.maximum(squared, 0.0))


def scaled_variance(w: float, beta: BetaLike) -> float:
    """``F(w) = int_0^w G_1(y)**2 dy``, so that ``Var X(t) = lam**(-2 beta) F(lam t)``."""
    order = HurstOrder.of(beta)
    mu = order.beta + 0.5
    return _head_integral(float(w), 2.0 * order.exponent, lambda y: mittag_leffler(y, mu) ** 2)


def _gram_variance(lam: float, t: float, order: HurstOrder, n_cells: int) -> float:
    n = n_cells
    while lam * t / n > UNDER_RESOLVED and n < GRAM_MAX_CELLS:
        n *= 2
    if n != n_cells:
        logger.warning("mode lam=%.4g under-resolved on %d cells (lam*delta=%.2f); refined to %d cells",
                       lam, n_cells, lam * t / n_cells, n)
    if lam * t / n > UNDER_RESOLVED:
        logger.warning("mode lam=%.4g still under-resolved at the %d-cell cap (lam*delta=%.2f)", lam, n, lam * t / n)
    values = tuple(
        isometry_norm(exponential_averages(TimeGrid(t_end=t, n_cells=n * 2**k), lam, t), order) ** 2
        for k in range(3)
    )
    value, rate = richardson_three_level(values)
    logger.debug("gram mode variance lam=%.4g: levels %s, order %.3f", lam, values, rate)
    return value


def mode_variance(lam: float, t: float, beta: BetaLike, method: str = "kernel", n_cells: int = GRAM_CELLS) -> float:
    """
    ``Var X(t)`` for ``dX = -lam X dt + dW``, ``X(0) = 0``: the squared
    isometry norm of ``s -> exp(-lam (t - s)) 1_{(0,t)}(s)``.

    ``kernel`` integrates the closed-form transform; ``gram`` evaluates the
    step-function isometry on refined grids with Richardson extrapolation.
    """
    if lam <= 0:
        raise ValueError(f"mode eigenvalue must be positive, got {lam}")
    if t < 0:
        raise ValueError(f"time must be >= 0, got {t}")
    if t == 0:
        return 0.0
    order = HurstOrder.of(beta)
    if method == "kernel":
        return ModeKernel(lam, order).variance(t)
    if method == "gram":
        return _gram_variance(lam, t, order, n_cells)
    raise ValueError(f"unknown mode variance method: {method}")
