import logging
import math
from typing import List, Mapping, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from liouville_fbm._core.errors import ThresholdViolationError
from liouville_fbm._frac.time_grid import TimeGrid
from liouville_fbm._lmt.activity import Activity
from liouville_fbm._spde.galerkin_model import series_converges
from liouville_fbm._spde.mild_solution import MildSolutionPaths
from liouville_fbm._utilities.numerics import loglog_fit

logger = logging.getLogger(__name__)

LAG_RANGE = (2.0**-9, 2.0**-4)
CORRECTED_FIT_MIN_LAGS = 4
CONTRACT_MARGIN = 0.1


class RegularityEstimate(BaseModel):
    """
    Hoelder exponent read off the structure function
    ``S(h) = E ||U(t + h) - U(t)||_{E_theta}**2``.

    ``raw_slope`` is the plain log-log slope; ``slope`` also fits a
    ``sqrt(h / T)`` term in ``log S`` that absorbs the Dirichlet boundary
    correction ``S(h) ~ c h**(2 alpha) - c' h**(2 alpha + 1/2)``.
    """

    model_config = ConfigDict(frozen=True)

    beta: float
    theta: float
    d: int
    lags: List[float]
    structure: List[float]
    raw_slope: float
    slope: float

    @property
    def estimate(self) -> float:
        return self.slope / 2.0

    @property
    def target(self) -> float:
        """``beta - theta - d/4``."""
        return self.beta - self.theta - self.d / 4.0

    @property
    def lower_bound(self) -> float:
        return self.target - CONTRACT_MARGIN

    @property
    def passes(self) -> bool:
        return self.estimate >= self.lower_bound


def structure_lags(grid: TimeGrid, lag_range: Tuple[float, float] = LAG_RANGE) -> np.ndarray:
    """Lags (in cells) whose length ``lag * delta`` lies inside ``lag_range * T``."""
    lo = max(1, math.ceil(lag_range[0] * grid.length / grid.delta - 1e-9))
    hi = math.floor(lag_range[1] * grid.length / grid.delta + 1e-9)
    return np.arange(lo, hi + 1)


def corrected_slope(h: np.ndarray, structure: np.ndarray, horizon: float) -> float:
    X = np.column_stack([np.ones_like(h), np.log(h), np.sqrt(h / horizon)])
    coef, *_ = np.linalg.lstsq(X, np.log(structure), rcond=None)
    return float(coef[1])


def regularity_estimate(
    paths: MildSolutionPaths,
    theta: Optional[float] = None,
    lag_range: Tuple[float, float] = LAG_RANGE,
) -> RegularityEstimate:
    theta = paths.model.theta if theta is None else theta
    beta = paths.beta.beta
    d = paths.model.d
    if paths.model.identity_noise and not series_converges(d, beta, theta):
        raise ThresholdViolationError(
            f"E_theta series diverges for d={d}, beta={beta}, theta={theta}: need 2 beta - 2 theta > d/2"
        )
    lags = structure_lags(paths.grid, lag_range)
    if lags.size < 2:
        raise ValueError(f"lag range {lag_range} holds {lags.size} grid lag(s); at least two are needed")
    h = lags * paths.grid.delta
    with Activity("spde.regularity_estimate", {"beta": beta, "theta": theta, "n_lags": int(lags.size)}):
        structure = paths.structure_function(lags, theta)
        raw_slope, _ = loglog_fit(h, structure)
        slope = corrected_slope(h, structure, paths.grid.length) if lags.size >= CORRECTED_FIT_MIN_LAGS else raw_slope
    result = RegularityEstimate(
        beta=beta,
        theta=theta,
        d=d,
        lags=h.tolist(),
        structure=structure.tolist(),
        raw_slope=raw_slope,
        slope=slope,
    )
    logger.info("regularity beta=%s theta=%s: estimate %.4f (raw %.4f), target %.4f",
                beta, theta, result.estimate, raw_slope / 2.0, result.target)
    return result


class LatticePoint(BaseModel):
    """One ``(beta, theta)`` cell of a regularity lattice; ``result`` is None where the norm diverges."""

    model_config = ConfigDict(frozen=True)

    beta: float
    theta: float
    result: Optional[RegularityEstimate] = None

    @property
    def finite(self) -> bool:
        return self.result is not None


def regularity_lattice(paths_by_beta: Mapping[float, MildSolutionPaths], thetas: Sequence[float]) -> List[LatticePoint]:
    """Regularity estimates for every simulated beta and every theta, in sorted order."""
    points = []
    for beta in sorted(paths_by_beta):
        for theta in sorted(thetas):
            try:
                result = regularity_estimate(paths_by_beta[beta], theta)
            except ThresholdViolationError as ex:
                logger.info("no regularity estimate at beta=%s theta=%s: %s", beta, theta, ex)
                result = None
            points.append(LatticePoint(beta=beta, theta=theta, result=result))
    return points


def _strictly_monotone(points: List[LatticePoint], along: str, fixed: str, increasing: bool) -> Optional[bool]:
    groups = {}
    for point in points:
        if point.finite:
            groups.setdefault(getattr(point, fixed), []).append(point)
    verdicts = []
    for group in groups.values():
        values = [p.result.estimate for p in sorted(group, key=lambda p: getattr(p, along))]
        if len(values) > 1:
            verdicts.append(all((b > a) if increasing else (b < a) for a, b in zip(values, values[1:])))
    return all(verdicts) if verdicts else None


def monotone_in_theta(points: List[LatticePoint]) -> Optional[bool]:
    """Estimates fall as theta grows at every beta; None when no beta has two finite estimates."""
    return _strictly_monotone(points, along="theta", fixed="beta", increasing=False)


def monotone_in_beta(points: List[LatticePoint]) -> Optional[bool]:
    return _strictly_monotone(points, along="beta", fixed="theta", increasing=True)
