from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional

import numpy as np
import pandas as pd

from liouville_fbm._core.errors import GridMismatchError
from liouville_fbm._frac.time_grid import TimeGrid


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Piecewise-constant function: ``values[j]`` on cell ``(t_j, t_{j+1}]``."""

    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float).reshape(-1)
        if values.size != self.grid.n_cells:
            raise ValueError(f"expected {self.grid.n_cells} cell values, got {values.size}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, grid: TimeGrid) -> "StepFunction":
        return cls(grid, np.zeros(grid.n_cells))

    @classmethod
    def constant(cls, grid: TimeGrid, value: float = 1.0) -> "StepFunction":
        return cls(grid, np.full(grid.n_cells, float(value)))

    @classmethod
    def indicator(cls, grid: TimeGrid, a: float, b: float) -> "StepFunction":
        """``1_{(a, b]}`` for grid nodes ``a < b``."""
        i, j = grid.node_index(a), grid.node_index(b)
        if i >= j:
            raise ValueError("indicator needs a < b")
        values = np.zeros(grid.n_cells)
        values[i:j] = 1.0
        return cls(grid, values)

    @classmethod
    def from_antiderivative(cls, grid: TimeGrid, antiderivative: Callable[[np.ndarray], np.ndarray]) -> "StepFunction":
        """Exact cell averages from a closed-form antiderivative."""
        F = np.asarray(antiderivative(grid.nodes()), dtype=float)
        return cls(grid, np.diff(F) / grid.delta)

    @property
    def n_cells(self) -> int:
        return self.grid.n_cells

    def l2_norm(self) -> float:
        return float(np.sqrt(self.grid.delta * np.dot(self.values, self.values)))

    def reverse(self) -> "StepFunction":
        return StepFunction(self.grid, self.values[::-1])

    def restrict(self, n_cells: int) -> "StepFunction":
        return StepFunction(self.grid.restrict(n_cells), self.values[:n_cells])

    def extend(self, extra_cells: int) -> "StepFunction":
        """Zero extension to the right by ``extra_cells`` cells."""
        return StepFunction(self.grid.extend(extra_cells), np.concatenate([self.values, np.zeros(extra_cells)]))

    def require_grid(self, grid: TimeGrid) -> None:
        if self.grid != grid:
            raise GridMismatchError(f"step function lives on {self.grid}, expected {grid}")

    def __add__(self, other: "StepFunction") -> "StepFunction":
        other.require_grid(self.grid)
        return StepFunction(self.grid, self.values + other.values)

    def __sub__(self, other: "StepFunction") -> "StepFunction":
        other.require_grid(self.grid)
        return StepFunction(self.grid, self.values - other.values)

    def __mul__(self, scalar: float) -> "StepFunction":
        return StepFunction(self.grid, self.values * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "StepFunction":
        return StepFunction(self.grid, -self.values)

    def to_frame(self) -> pd.DataFrame:
        """One row per cell, keyed by the right endpoint of the cell."""
        return pd.DataFrame({"t": self.grid.right_nodes(), "value": self.values})

    def to_dict(self) -> Dict[str, Any]:
        return {"grid": self.grid.model_dump(), "values": self.values.tolist()}

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "StepFunction":
        return cls(TimeGrid(**payload["grid"]), np.asarray(payload["values"], dtype=float))


def node_frame(grid: TimeGrid, values: np.ndarray, nodes: Optional[np.ndarray] = None) -> pd.DataFrame:
    nodes = grid.right_nodes() if nodes is None else nodes
    return pd.DataFrame({"t": nodes, "value": np.asarray(values, dtype=float)})


def singular_power_averages(grid: TimeGrid, endpoint: float, alpha: float, lower: Optional[float] = None) -> StepFunction:
    """
    Cell averages of ``r -> (endpoint - r)**(-alpha)`` restricted to
    ``(lower, endpoint)``, from the closed-form antiderivative (alpha != 1).
    """
    if alpha >= 1:
        raise ValueError("alpha must be < 1 for an integrable power singularity")
    lower = grid.t_start if lower is None else lower
    nodes = grid.nodes()
    lo = np.clip(nodes[:-1], lower, endpoint)
    hi = np.clip(nodes[1:], lower, endpoint)
    exponent = 1.0 - alpha
    integrals = ((endpoint - lo) ** exponent - (endpoint - hi) ** exponent) / exponent
    return StepFunction(grid, integrals / grid.delta)


def exponential_averages(grid: TimeGrid, rate: float, endpoint: float) -> StepFunction:
    """Cell averages of ``r -> exp(-rate * (endpoint - r))`` on ``(t_start, endpoint)``."""
    nodes = grid.nodes()
    lo = np.minimum(nodes[:-1], endpoint)
    hi = np.minimum(nodes[1:], endpoint)
    integrals = -np.exp(-rate * (endpoint - hi)) * np.expm1(-rate * (hi - lo)) / rate
    return StepFunction(grid, integrals / grid.delta)
