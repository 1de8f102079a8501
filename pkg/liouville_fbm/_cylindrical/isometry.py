import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from liouville_fbm._core.errors import DimensionMismatchError, GridMismatchError
from liouville_fbm._cylindrical.ensemble import CylindricalEnsemble
from liouville_fbm._cylindrical.finite_rank_map import FiniteRankMap
from liouville_fbm._cylindrical.operator_path import OperatorPath
from liouville_fbm._fbm.hurst import BetaLike
from liouville_fbm._frac.step_function import StepFunction
from liouville_fbm._integral.estimate import McEstimate
from liouville_fbm._integral.isometry import isometry_norm
from liouville_fbm._integral.transform import IntegrandTransform


@dataclass(frozen=True)
class VectorIntegral:
    outcomes: np.ndarray
    squared_norm: McEstimate

    def coordinate_estimate(self, state: int) -> McEstimate:
        return McEstimate.from_samples(self.outcomes[:, state])


def representation_norm(phi: OperatorPath, beta: BetaLike) -> float:
    """
    ``(E||int Phi dW||**2)**(1/2)``. Each (state, noise) entry of ``Phi`` is a
    scalar step function; the squared norm is the sum of their scalar
    isometry norms squared.
    """
    norms = IntegrandTransform.build(phi.grid, beta).norms(phi.coefficient_matrix())
    return float(math.sqrt(np.sum(norms**2)))


def integrate_vector_mc(phi: OperatorPath, ensemble: CylindricalEnsemble) -> VectorIntegral:
    """Pathwise ``sum_j Phi_j (W(t_j) - W(t_{j-1}))`` with the noise coordinates as columns."""
    if phi.dim_noise != ensemble.dim_noise:
        raise DimensionMismatchError(f"Phi acts on R^{phi.dim_noise}, the noise has {ensemble.dim_noise} coordinates")
    if phi.grid != ensemble.grid:
        raise GridMismatchError(f"operator path grid {phi.grid} does not match ensemble grid {ensemble.grid}")
    outcomes = np.einsum("jel,lrj->re", phi.cells, ensemble.increments())
    return VectorIntegral(outcomes=outcomes, squared_norm=McEstimate.from_samples(np.sum(outcomes**2, axis=1)))


def tensor_identity_check(f: StepFunction, directions: np.ndarray, states: np.ndarray, beta: BetaLike) -> Tuple[float, float]:
    """
    Norm of ``t -> f(t) sum_n h_n (x) x_n`` against
    ``isometry_norm(f) * ||sum_n h_n (x) x_n||_HS``; ``directions`` rows are
    the orthonormal ``h_n``, ``states`` rows the matching ``x_n``.
    """
    directions = np.atleast_2d(directions)
    states = np.atleast_2d(states)
    if directions.shape[0] != states.shape[0]:
        raise DimensionMismatchError("need one state vector per noise direction")
    S = FiniteRankMap(states.T @ directions)
    lhs = representation_norm(OperatorPath.scalar(f, S), beta)
    return lhs, isometry_norm(f, beta) * S.hs_norm()
