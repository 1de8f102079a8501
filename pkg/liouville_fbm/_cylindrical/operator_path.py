import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Sequence, Union

import numpy as np

from liouville_fbm._core.errors import DimensionMismatchError
from liouville_fbm._cylindrical.finite_rank_map import FiniteRankMap
from liouville_fbm._frac.step_function import StepFunction
from liouville_fbm._frac.time_grid import TimeGrid

AVERAGE_POINTS = 8
DERIVATIVE_CHECK_TOLERANCE = 1e-6

MapFunction = Callable[[float], np.ndarray]


@dataclass(frozen=True, eq=False)
class OperatorPath:
    """Piecewise-constant ``Phi``: ``cells[j]`` is the ``e x m`` map on cell ``j``."""

    grid: TimeGrid
    cells: np.ndarray

    def __post_init__(self):
        cells = np.array(self.cells, dtype=float)
        if cells.ndim != 3 or cells.shape[0] != self.grid.n_cells:
            raise DimensionMismatchError(f"cells must have shape ({self.grid.n_cells}, e, m), got {cells.shape}")
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)

    @classmethod
    def from_maps(cls, grid: TimeGrid, maps: Sequence[FiniteRankMap]) -> "OperatorPath":
        shapes = {m.entries.shape for m in maps}
        if len(shapes) != 1:
            raise DimensionMismatchError(f"all maps of a path must share (e, m), got {sorted(shapes)}")
        return cls(grid, np.stack([m.entries for m in maps]))

    @classmethod
    def constant(cls, grid: TimeGrid, S: FiniteRankMap) -> "OperatorPath":
        return cls(grid, np.broadcast_to(S.entries, (grid.n_cells,) + S.entries.shape))

    @classmethod
    def scalar(cls, f: StepFunction, S: FiniteRankMap) -> "OperatorPath":
        """``t -> f(t) S``."""
        return cls(f.grid, f.values[:, None, None] * S.entries[None, :, :])

    @classmethod
    def from_function(cls, grid: TimeGrid, func: MapFunction, rule: str = "right") -> "OperatorPath":
        """
        Discretize a map-valued function. ``right`` samples at right cell
        endpoints; ``average`` takes Gauss-Legendre cell averages.
        """
        nodes = grid.nodes()
        if rule == "right":
            return cls(grid, np.stack([np.asarray(func(t), dtype=float) for t in nodes[1:]]))
        if rule == "average":
            x, w = np.polynomial.legendre.leggauss(AVERAGE_POINTS)
            cells = []
            for lo, hi in zip(nodes[:-1], nodes[1:]):
                points = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
                cells.append(0.5 * sum(wi * np.asarray(func(p), dtype=float) for wi, p in zip(w, points)))
            return cls(grid, np.stack(cells))
        raise ValueError(f"unknown discretization rule: {rule}")

    @property
    def dim_state(self) -> int:
        return self.cells.shape[1]

    @property
    def dim_noise(self) -> int:
        return self.cells.shape[2]

    def map_at(self, j: int) -> FiniteRankMap:
        return FiniteRankMap(self.cells[j])

    def component(self, state: int, noise: int) -> StepFunction:
        return StepFunction(self.grid, self.cells[:, state, noise])

    def coefficient_matrix(self) -> np.ndarray:
        """``(e * m, n_cells)``: one scalar step function per (state, noise) pair."""
        return self.cells.reshape(self.grid.n_cells, -1).T

    def brownian_norm(self) -> float:
        """``(int ||Phi(t)||_HS**2 dt)**(1/2)``."""
        return float(np.sqrt(self.grid.delta * np.sum(self.cells**2)))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m": self.dim_noise,
            "e": self.dim_state,
            "grid": self.grid.model_dump(),
            "cells": self.cells.tolist(),
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "OperatorPath":
        path = cls(TimeGrid(**payload["grid"]), np.asarray(payload["cells"], dtype=float))
        if (path.dim_noise, path.dim_state) != (payload["m"], payload["e"]):
            raise DimensionMismatchError(
                f"declared m={payload['m']}, e={payload['e']} but cells are {path.dim_state}x{path.dim_noise}"
            )
        return path

    @classmethod
    def load_json(cls, path: Union[str, Path]) -> "OperatorPath":
        with open(path, encoding="utf-8") as f:
            return cls.from_dict(json.load(f))


class SmoothOperatorPath:
    """A differentiable ``Phi`` given as a (value, derivative) pair of evaluators."""

    def __init__(self, value: MapFunction, derivative: MapFunction, horizon: float = 1.0):
        self.value = value
        self.derivative = derivative
        self.horizon = horizon
        sample = np.asarray(value(horizon), dtype=float)
        if sample.ndim != 2:
            raise DimensionMismatchError("a smooth operator path must return e x m arrays")
        self.dim_state, self.dim_noise = sample.shape

    def derivative_hs(self, t: float) -> float:
        return float(np.sqrt(np.sum(np.asarray(self.derivative(t), dtype=float) ** 2)))

    def terminal_hs(self) -> float:
        return float(np.sqrt(np.sum(np.asarray(self.value(self.horizon), dtype=float) ** 2)))

    def check_derivative(self, times: Optional[Sequence[float]] = None, tolerance: float = DERIVATIVE_CHECK_TOLERANCE) -> None:
        """Compare the derivative evaluator with central differences; raise on disagreement."""
        times = np.linspace(0.05, 0.95, 10) * self.horizon if times is None else times
        for t in times:
            h = 1e-4 * min(1.0, t)
            numeric = (np.asarray(self.value(t + h)) - np.asarray(self.value(t - h))) / (2.0 * h)
            exact = np.asarray(self.derivative(t), dtype=float)
            error = float(np.max(np.abs(numeric - exact)))
            if error > tolerance * max(1.0, float(np.max(np.abs(exact)))):
                raise ValueError(f"derivative evaluator disagrees with finite differences at t={t}: error {error:.2e}")

    def discretize(self, grid: TimeGrid, rule: str = "right") -> OperatorPath:
        return OperatorPath.from_function(grid, self.value, rule)
