from functools import lru_cache
from typing import Callable

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.integrate import quad

from liouville_fbm._fbm.covariance import unit_liouville_matrix
from liouville_fbm._fbm.hurst import BetaLike, HurstOrder, Regime
from liouville_fbm._frac.kernel import Side, apply, build_kernel, solve_derivative
from liouville_fbm._frac.step_function import StepFunction
from liouville_fbm._frac.time_grid import TimeGrid


@lru_cache(maxsize=32)
def unit_indicator_gram(n_cells: int, beta: float) -> np.ndarray:
    """
    ``M[j, l] = E[(W(j+1) - W(j)) (W(l+1) - W(l))]`` on unit spacing: the
    Gram matrix of the cell indicators in the Liouville integrand space.
    """
    C = unit_liouville_matrix(n_cells, beta)
    M = C[1:, 1:] - C[1:, :-1] - C[:-1, 1:] + C[:-1, :-1]
    M = 0.5 * (M + M.T)
    M.setflags(write=False)
    return M


def indicator_gram(grid: TimeGrid, beta: BetaLike) -> np.ndarray:
    order = HurstOrder.of(beta)
    if grid.t_start != 0.0:
        raise ValueError("stochastic integrals are taken over grids starting at 0")
    if order.is_brownian:
        return grid.delta * np.eye(grid.n_cells)
    return grid.delta ** (2.0 * order.beta) * unit_indicator_gram(grid.n_cells, order.beta)


class IntegrandTransform(BaseModel):
    """
    Regime-dependent map from a deterministic integrand ``f`` to the L2
    function whose norm is the standard deviation of ``int f dW``:

    - below_half: right fractional derivative of order ``1/2 - beta``;
    - brownian: identity;
    - above_half: right fractional integral of order ``beta - 1/2``.

    ``transform`` is the grid discretization; ``norm`` is exact on step
    functions because it is the quadratic form of ``indicator_gram``.
    """

    model_config = ConfigDict(frozen=True)

    beta: HurstOrder
    grid: TimeGrid

    @classmethod
    def build(cls, grid: TimeGrid, beta: BetaLike) -> "IntegrandTransform":
        if grid.t_start != 0.0:
            raise ValueError("stochastic integrals are taken over grids starting at 0")
        return cls(beta=HurstOrder.of(beta), grid=grid)

    @property
    def regime(self) -> Regime:
        return self.beta.regime

    def transform(self, f: StepFunction) -> StepFunction:
        f.require_grid(self.grid)
        if self.regime is Regime.BROWNIAN:
            return f
        if self.regime is Regime.BELOW_HALF:
            return solve_derivative(build_kernel(self.grid, 0.5 - self.beta.beta, Side.RIGHT), f.values)
        return StepFunction(self.grid, apply(build_kernel(self.grid, self.beta.beta - 0.5, Side.RIGHT), f))

    def gram(self) -> np.ndarray:
        return indicator_gram(self.grid, self.beta)

    def norms(self, coefficients: np.ndarray) -> np.ndarray:
        """Exact norms for each row of a ``(k, n_cells)`` coefficient array."""
        c = np.atleast_2d(np.asarray(coefficients, dtype=float))
        if self.regime is Regime.BROWNIAN:
            return np.sqrt(self.grid.delta * np.sum(c * c, axis=1))
        quadratic = np.einsum("ij,jk,ik->i", c, self.gram(), c)
        return np.sqrt(np.maximum(quadratic, 0.0))

    def norm(self, f: StepFunction) -> float:
        f.require_grid(self.grid)
        if self.regime is Regime.BROWNIAN:
            return f.l2_norm()
        return float(self.norms(f.values)[0])

    def explicit(self, f: StepFunction) -> Callable[[float], float]:
        """
        Closed-form transform of a step function,
        ``g(s) = sum_j c_j ((t_j - s)_+**a - (t_{j-1} - s)_+**a) / Gamma(beta + 1/2)``.
        """
        f.require_grid(self.grid)
        nodes = self.grid.nodes()
        coefficients = np.asarray(f.values)
        a = self.beta.exponent
        scale = 1.0 / self.beta.kernel_gamma

        def g(s: float) -> float:
            x = nodes - s
            with np.errstate(divide="ignore"):
                powered = np.where(x > 0, np.abs(x) ** a, 0.0)
            return scale * float(np.dot(coefficients, powered[1:] - powered[:-1]))

        return g

    def explicit_norm(self, f: StepFunction, tolerance: float = 1e-11) -> float:
        """L2 norm of ``explicit(f)`` by cellwise adaptive quadrature."""
        g = self.explicit(f)
        nodes = self.grid.nodes()
        total = 0.0
        for lo, hi in zip(nodes[:-1], nodes[1:]):
            value, _ = quad(lambda s: g(s) ** 2, lo, hi, epsabs=tolerance, epsrel=tolerance, limit=200)
            total += value
        return float(np.sqrt(total))
