import logging
from typing import List, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from liouville_fbm._fbm.hurst import HurstOrder
from liouville_fbm._lmt.activity import Activity
from liouville_fbm._spde.galerkin_model import GalerkinModel, series_converges
from liouville_fbm._spde.mode_kernel import mode_variance
from liouville_fbm._utilities.numerics import loglog_fit

logger = logging.getLogger(__name__)

TAIL_WINDOW = 0.25


class ThresholdRow(BaseModel):
    """Partial sums of ``sum_k lambda_k**(2 theta) Var X_k(T)`` for one ``beta``."""

    model_config = ConfigDict(frozen=True)

    d: int
    beta: float
    theta: float
    horizon: float
    K_list: List[int]
    partial_sums: List[float]
    tail_exponent: float

    @property
    def expected_exponent(self) -> float:
        """``(2/d)(2 theta - 2 beta)``: decay of the modal terms in the mode count."""
        return (2.0 / self.d) * (2.0 * self.theta - 2.0 * self.beta)

    @property
    def convergent(self) -> bool:
        return self.tail_exponent < -1.0

    @property
    def classification(self) -> str:
        return "convergent" if self.convergent else "divergent"

    @property
    def expected_convergent(self) -> bool:
        return series_converges(self.d, self.beta, self.theta)

    @property
    def consistent(self) -> bool:
        return self.convergent == self.expected_convergent


def modal_terms(d: int, beta: float, theta: float, K: int, horizon: float = 1.0) -> np.ndarray:
    """``lambda_k**(2 theta) mode_variance(lambda_k, T, beta)`` for the ``K`` lowest modes."""
    lam = GalerkinModel(d=d, K=K).eigenvalues()
    order = HurstOrder.of(beta)
    return lam ** (2.0 * theta) * np.array([mode_variance(lam_k, horizon, order) for lam_k in lam])


def existence_threshold_scan(
    d: int,
    betas: Sequence[float],
    theta: float,
    K_list: Sequence[int],
    horizon: float = 1.0,
) -> List[ThresholdRow]:
    """
    Classify each ``beta`` by the decay of the modal terms over the last
    three quarters of the largest cutoff: convergent iff the fitted exponent
    is below ``-1``.
    """
    if d not in (1, 2):
        raise ValueError(f"d must be 1 or 2, got {d}")
    if theta < 0:
        raise ValueError(f"theta must be >= 0, got {theta}")
    K_list = sorted(int(K) for K in K_list)
    K_max = K_list[-1]
    if K_max < 8:
        raise ValueError("the tail fit needs a largest cutoff of at least 8 modes")
    rows = []
    for beta in betas:
        with Activity("spde.threshold_scan", {"d": d, "beta": beta, "theta": theta, "K_max": K_max}):
            terms = modal_terms(d, beta, theta, K_max, horizon)
            partial = np.cumsum(terms)
            j = np.arange(1, K_max + 1)
            window = j >= TAIL_WINDOW * K_max
            exponent, _ = loglog_fit(j[window], terms[window])
        row = ThresholdRow(
            d=d,
            beta=float(beta),
            theta=theta,
            horizon=horizon,
            K_list=K_list,
            partial_sums=[float(partial[K - 1]) for K in K_list],
            tail_exponent=exponent,
        )
        if not row.consistent:
            logger.warning("beta=%s classified %s but 2 beta - 2 theta vs d/2 says otherwise (exponent %.3f)",
                           beta, row.classification, exponent)
        rows.append(row)
    return rows
