import logging
import math
from typing import Dict, Sequence, Tuple

import numpy as np
from scipy.special import gamma

from liouville_fbm._core.errors import DivergentNormError, GridMismatchError
from liouville_fbm._fbm.ensemble import PathEnsemble
from liouville_fbm._fbm.hurst import BetaLike, HurstOrder
from liouville_fbm._frac.step_function import StepFunction, singular_power_averages
from liouville_fbm._frac.time_grid import TimeGrid
from liouville_fbm._integral.estimate import McEstimate
from liouville_fbm._integral.transform import IntegrandTransform
from liouville_fbm._utilities.numerics import loglog_fit, richardson

logger = logging.getLogger(__name__)

KERNEL_VARIANCE_CELLS = 512
KERNEL_SCALING_LAGS = tuple(2.0**-k for k in range(8, 1, -1))


def isometry_norm(f: StepFunction, beta: BetaLike) -> float:
    """``(E|int f dW|**2)**(1/2)`` for a step function ``f``."""
    return IntegrandTransform.build(f.grid, beta).norm(f)


def integrate_pathwise(f: StepFunction, ensemble: PathEnsemble) -> np.ndarray:
    """``sum_j c_j (W(t_j) - W(t_{j-1}))`` for every path of the ensemble."""
    if f.grid != ensemble.grid:
        raise GridMismatchError(f"integrand grid {f.grid} does not match ensemble grid {ensemble.grid}")
    return ensemble.increments() @ f.values


def integrate_mc(f: StepFunction, beta: BetaLike, ensemble: PathEnsemble) -> McEstimate:
    order = HurstOrder.of(beta)
    if not math.isclose(order.beta, ensemble.beta.beta, rel_tol=0.0, abs_tol=1e-12):
        raise ValueError(f"ensemble has beta={ensemble.beta.beta}, integrand asks for {order.beta}")
    return McEstimate.from_samples(integrate_pathwise(f, ensemble))


def _check_kernel_orders(alpha: float, order: HurstOrder) -> None:
    upper = min(order.beta + 0.5, 1.0)
    if not 0.0 <= alpha < upper:
        raise ValueError(f"alpha must lie in [0, {upper}) for beta={order.beta}, got {alpha}")
    if alpha >= order.beta:
        raise DivergentNormError(
            f"int (t-r)**(-alpha) dW(r) has infinite variance for alpha={alpha} >= beta={order.beta}"
        )


def kernel_constant(alpha: float, beta: BetaLike) -> float:
    """``Gamma(1-alpha) / (Gamma(beta+1/2-alpha) sqrt(2(beta-alpha)))``."""
    order = HurstOrder.of(beta)
    _check_kernel_orders(alpha, order)
    return float(gamma(1.0 - alpha) / (gamma(order.beta + 0.5 - alpha) * math.sqrt(2.0 * (order.beta - alpha))))


def _kernel_squared_norm(s: float, t: float, alpha: float, order: HurstOrder, n_cells: int) -> float:
    grid = TimeGrid(t_start=0.0, t_end=t, n_cells=n_cells)
    f = singular_power_averages(grid, t, alpha, lower=s)
    return IntegrandTransform.build(grid, order).norm(f) ** 2


def kernel_variance(s: float, t: float, alpha: float, beta: BetaLike, n_cells: int = KERNEL_VARIANCE_CELLS) -> float:
    """
    ``(E|int_s^t (t-r)**(-alpha) dW(r)|**2)**(1/2)``.

    The integrand is cell-averaged on ``n_cells`` and ``2 n_cells`` cells of
    ``(0, t)``; the near-singular error scales like ``delta**(2(beta-alpha))``
    and is removed by Richardson extrapolation.
    """
    order = HurstOrder.of(beta)
    _check_kernel_orders(alpha, order)
    if not 0.0 <= s < t:
        raise ValueError(f"need 0 <= s < t, got s={s}, t={t}")
    coarse = _kernel_squared_norm(s, t, alpha, order, n_cells)
    fine = _kernel_squared_norm(s, t, alpha, order, 2 * n_cells)
    value = fine if alpha == 0.0 else richardson(coarse, fine, 2.0 * (order.beta - alpha))
    return math.sqrt(max(value, 0.0))


def kernel_scaling(
    alpha: float,
    beta: BetaLike,
    lags: Sequence[float] = KERNEL_SCALING_LAGS,
    n_cells: int = KERNEL_VARIANCE_CELLS,
) -> Dict[str, object]:
    """
    Slope of ``log kernel_variance(0, h)`` against ``log h`` and the
    constants ``kernel_variance(0, h) / h**(beta-alpha)`` per lag.
    """
    order = HurstOrder.of(beta)
    values = [kernel_variance(0.0, h, alpha, order, n_cells) for h in lags]
    slope, _ = loglog_fit(lags, values)
    constants = [v / h ** (order.beta - alpha) for v, h in zip(values, lags)]
    logger.info("kernel scaling alpha=%s beta=%s: slope %.6f, c=%.6f", alpha, order.beta, slope, constants[0])
    return {"lags": list(lags), "values": values, "slope": slope, "constants": constants}


def extracted_constant(alpha: float, beta: BetaLike, lag: float, n_cells: int = KERNEL_VARIANCE_CELLS) -> float:
    order = HurstOrder.of(beta)
    return kernel_variance(0.0, lag, alpha, order, n_cells) / lag ** (order.beta - alpha)


def constant_drift(alpha: float, beta: BetaLike, lags: Tuple[float, float] = (2.0**-3, 2.0**-6)) -> float:
    """Relative difference of the constant extracted at two lags."""
    c1 = extracted_constant(alpha, beta, lags[0])
    c2 = extracted_constant(alpha, beta, lags[1])
    return abs(c1 - c2) / abs(c1)
