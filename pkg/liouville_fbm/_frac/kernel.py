"""
Riemann-Liouville fractional integrals on a uniform grid.

The kernel matrices are exact on step functions: ``apply(build_kernel(grid,
alpha, 'left'), f)[i]`` is the value of the left fractional integral of ``f``
at node ``t_{i+1}``, and the right-sided version evaluates at ``t_i``.
Fractional derivatives are triangular solves against the same matrices.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Union

import numpy as np
from scipy.linalg import solve_triangular, toeplitz
from scipy.special import gamma

from liouville_fbm._core.errors import GridMismatchError, IllConditionedError
from liouville_fbm._frac.step_function import StepFunction, singular_power_averages
from liouville_fbm._frac.time_grid import TimeGrid

logger = logging.getLogger(__name__)

PIVOT_TOLERANCE = 1e-14


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True, eq=False)
class FracKernelMatrix:
    grid: TimeGrid
    order: float
    side: Side
    entries: np.ndarray

    @property
    def lower(self) -> bool:
        return self.side is Side.LEFT

    def evaluation_nodes(self) -> np.ndarray:
        return self.grid.right_nodes() if self.lower else self.grid.left_nodes()


def _check_order(alpha: float) -> None:
    if not 0 < alpha < 1:
        raise ValueError(f"fractional order must lie in (0, 1), got {alpha}")


def kernel_weights(n_cells: int, delta: float, alpha: float) -> np.ndarray:
    """``w_p = delta**alpha * ((p+1)**alpha - p**alpha) / Gamma(alpha+1)``."""
    p = np.arange(n_cells, dtype=float)
    return delta**alpha * ((p + 1.0) ** alpha - p**alpha) / gamma(alpha + 1.0)


@lru_cache(maxsize=64)
def _cached_entries(grid: TimeGrid, alpha: float, side: Side) -> np.ndarray:
    w = kernel_weights(grid.n_cells, grid.delta, alpha)
    zeros = np.zeros(grid.n_cells)
    entries = toeplitz(w, zeros) if side is Side.LEFT else toeplitz(zeros, w)
    entries[np.diag_indices(grid.n_cells)] = w[0]
    entries.setflags(write=False)
    return entries


def build_kernel(grid: TimeGrid, alpha: float, side: Union[Side, str] = Side.LEFT) -> FracKernelMatrix:
    _check_order(alpha)
    side = Side(side)
    return FracKernelMatrix(grid=grid, order=float(alpha), side=side, entries=_cached_entries(grid, float(alpha), side))


def apply(K: FracKernelMatrix, f: StepFunction) -> np.ndarray:
    if f.grid != K.grid:
        raise GridMismatchError(f"kernel grid {K.grid} does not match step function grid {f.grid}")
    return K.entries @ f.values


def solve_derivative(K: FracKernelMatrix, g) -> StepFunction:
    """Step function ``f`` with ``apply(K, f) == g``: the discrete fractional derivative."""
    g = np.asarray(g, dtype=float).reshape(-1)
    if g.size != K.grid.n_cells:
        raise GridMismatchError(f"expected {K.grid.n_cells} node values, got {g.size}")
    pivot = float(np.min(np.abs(np.diag(K.entries))))
    if pivot < PIVOT_TOLERANCE * K.grid.delta**K.order:
        raise IllConditionedError(f"kernel pivot {pivot:.3e} too small for order {K.order}")
    return StepFunction(K.grid, solve_triangular(K.entries, g, lower=K.lower, check_finite=False))


def h_norm(f: StepFunction, alpha: float, side: Union[Side, str] = Side.LEFT) -> float:
    """
    Discrete norm of ``f`` in ``H^alpha`` on the grid interval.

    alpha > 0: L2 norm of the fractional derivative of ``f`` (the node values
    of ``f`` are its cell values read at the kernel's evaluation nodes).
    alpha < 0: L2 norm of the fractional integral of order ``-alpha``.
    """
    if not -1 < alpha < 1:
        raise ValueError(f"H-norm order must lie in (-1, 1), got {alpha}")
    if alpha == 0:
        return f.l2_norm()
    if alpha > 0:
        return solve_derivative(build_kernel(f.grid, alpha, side), f.values).l2_norm()
    image = apply(build_kernel(f.grid, -alpha, side), f)
    return float(np.sqrt(f.grid.delta * np.dot(image, image)))


def reconstruction_error(grid: TimeGrid, alpha: float, y: float) -> float:
    """
    L2 distance between the right fractional integral of the cell-averaged
    ``g_y(t) = (y-t)**(-alpha) 1_{(0,y)}(t) / Gamma(1-alpha)`` and ``1_{(0,y)}``,
    measured on the left nodes.
    """
    g = singular_power_averages(grid, y, alpha) * (1.0 / gamma(1.0 - alpha))
    image = apply(build_kernel(grid, alpha, Side.RIGHT), g)
    target = (grid.left_nodes() < y - 1e-12 * grid.length).astype(float)
    residual = image - target
    return float(np.sqrt(grid.delta * np.dot(residual, residual)))


def compose(outer: float, inner: float, f: StepFunction) -> np.ndarray:
    """
    ``I^outer I^inner f`` at the right nodes, with the inner image turned
    back into a step function by averaging its values at both cell ends.
    """
    inner_image = apply(build_kernel(f.grid, inner, Side.LEFT), f)
    at_left = np.concatenate([[0.0], inner_image[:-1]])
    averaged = StepFunction(f.grid, 0.5 * (at_left + inner_image))
    return apply(build_kernel(f.grid, outer, Side.LEFT), averaged)


def norm_ratio_bracket(grid: TimeGrid, alpha: float, samples: np.ndarray) -> tuple:
    """
    ``[min, max]`` of ``h_norm(f, alpha, left) / h_norm(f, alpha, right)``
    over the rows of ``samples`` (one step function per row).
    """
    if not 0 < alpha < 0.5:
        raise ValueError("left and right spaces coincide only for 0 < alpha < 1/2")
    left = build_kernel(grid, alpha, Side.LEFT)
    right = build_kernel(grid, alpha, Side.RIGHT)
    samples = np.atleast_2d(samples)
    dl = solve_triangular(left.entries, samples.T, lower=True, check_finite=False)
    dr = solve_triangular(right.entries, samples.T, lower=False, check_finite=False)
    ratios = np.sqrt(np.sum(dl**2, axis=0) / np.sum(dr**2, axis=0))
    logger.debug("norm ratio bracket alpha=%s n=%d: [%.4f, %.4f]", alpha, grid.n_cells, ratios.min(), ratios.max())
    return float(ratios.min()), float(ratios.max())
