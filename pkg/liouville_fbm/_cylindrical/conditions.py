import logging
import math
from typing import Callable, List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.integrate import quad
from scipy.special import gamma

from liouville_fbm._core.configuration import get_settings
from liouville_fbm._cylindrical.isometry import representation_norm
from liouville_fbm._cylindrical.operator_path import OperatorPath, SmoothOperatorPath
from liouville_fbm._fbm.hurst import BetaLike, HurstOrder
from liouville_fbm._frac.time_grid import TimeGrid
from liouville_fbm._lmt.activity import Activity

logger = logging.getLogger(__name__)

BOUND_GRID_TOLERANCE = 5e-3
REFINEMENT_LEVELS = 3


def bound_constant(beta: BetaLike) -> float:
    """``C_beta = 1 / (sqrt(2 beta) Gamma(1/2 + beta))``."""
    b = HurstOrder.of(beta).beta
    return 1.0 / (math.sqrt(2.0 * b) * gamma(0.5 + b))


class SufficientBound(BaseModel):
    model_config = ConfigDict(frozen=True)

    beta: float
    constant: float
    terminal_term: float
    derivative_term: float
    actual: float

    @property
    def bound(self) -> float:
        return self.terminal_term + self.derivative_term

    def holds(self, tolerance: float = BOUND_GRID_TOLERANCE) -> bool:
        return self.actual <= self.bound * (1.0 + tolerance)


def suff_condition_bound(phi: SmoothOperatorPath, beta: BetaLike, grid: TimeGrid) -> SufficientBound:
    """
    Compare the representation norm of ``Phi`` (sampled at right cell
    endpoints) with ``C T**beta ||Phi(T)|| + C int t**beta ||Phi'(t)|| dt``.
    """
    order = HurstOrder.of(beta)
    if not 0.0 < order.beta < 0.5:
        raise ValueError(f"the derivative bound needs beta in (0, 1/2), got {order.beta}")
    if grid.t_start != 0.0 or not math.isclose(grid.t_end, phi.horizon):
        raise ValueError("the grid must cover (0, T) with T the horizon of the operator path")
    phi.check_derivative()
    tol = get_settings().quad_tolerance
    with Activity("cylindrical.suff_condition_bound", {"beta": order.beta, "n_cells": grid.n_cells}):
        C = bound_constant(order)
        integral, _ = quad(lambda t: t**order.beta * phi.derivative_hs(t), 0.0, phi.horizon,
                           epsabs=tol, epsrel=tol, limit=200)
        actual = representation_norm(phi.discretize(grid, "right"), order)
    return SufficientBound(
        beta=order.beta,
        constant=C,
        terminal_term=C * phi.horizon**order.beta * phi.terminal_hs(),
        derivative_term=C * integral,
        actual=actual,
    )


class DominationReport(BaseModel):
    """
    Liouville and Brownian norms of one operator path. ``weighted_norms``
    holds the Liouville norm of ``t**alpha Phi(t)`` on successively doubled
    grids when a weight exponent is given.
    """

    model_config = ConfigDict(frozen=True)

    beta: float
    alpha: Optional[float] = None
    liouville_norm: float
    brownian_norm: float
    weighted_norms: List[float] = []

    @property
    def ordering_holds(self) -> bool:
        liouville_ok, brownian_ok = math.isfinite(self.liouville_norm), math.isfinite(self.brownian_norm)
        if self.beta < 0.5:
            ordered = brownian_ok or not liouville_ok
        else:
            ordered = liouville_ok or not brownian_ok
        return ordered and all(math.isfinite(v) for v in self.weighted_norms)

    @property
    def refinement_drift(self) -> float:
        """Relative change of the weighted norm over the last grid doubling."""
        if len(self.weighted_norms) < 2:
            return 0.0
        coarse, fine = self.weighted_norms[-2:]
        return abs(fine - coarse) / abs(fine)


def _weighted(phi: Union[OperatorPath, Callable], grid: TimeGrid, alpha: float) -> OperatorPath:
    if isinstance(phi, OperatorPath):
        nodes = grid.nodes()
        weights = (nodes[1:] ** (alpha + 1.0) - nodes[:-1] ** (alpha + 1.0)) / ((alpha + 1.0) * grid.delta)
        return OperatorPath(grid, phi.cells * weights[:, None, None])
    return OperatorPath.from_function(grid, lambda t: t**alpha * np.asarray(phi(t)), "average")


def domination_check(
    phi: Union[OperatorPath, Callable],
    beta: BetaLike,
    grid: Optional[TimeGrid] = None,
    alpha: Optional[float] = None,
    levels: int = REFINEMENT_LEVELS,
) -> DominationReport:
    """
    ``phi`` is either a piecewise-constant path or a map-valued function of
    time discretized by cell averages on ``grid``. With ``alpha`` (requires
    ``beta > 1/2`` and ``0 <= alpha < beta - 1/2``) the weighted path is
    evaluated on ``levels`` successively doubled grids, or once for a
    piecewise-constant path.
    """
    order = HurstOrder.of(beta)
    if isinstance(phi, OperatorPath):
        grid = phi.grid
        path = phi
    else:
        if grid is None:
            raise ValueError("a grid is needed to discretize a map-valued function")
        path = OperatorPath.from_function(grid, phi, "average")
    weighted_norms: List[float] = []
    if alpha is not None:
        if order.beta <= 0.5:
            raise ValueError(f"weighted integrands need beta > 1/2, got {order.beta}")
        if not 0.0 <= alpha < order.beta - 0.5:
            raise ValueError(f"alpha must lie in [0, {order.beta - 0.5}), got {alpha}")
        grids = [grid] if isinstance(phi, OperatorPath) else [grid.refine(2**k) for k in range(levels)]
        weighted_norms = [representation_norm(_weighted(phi, g, alpha), order) for g in grids]
    report = DominationReport(
        beta=order.beta,
        alpha=alpha,
        liouville_norm=representation_norm(path, order),
        brownian_norm=path.brownian_norm(),
        weighted_norms=weighted_norms,
    )
    if report.refinement_drift > 0.05:
        logger.warning("weighted norm drifts by %.2f%% over the last grid doubling", 100.0 * report.refinement_drift)
    return report
