from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict

import numpy as np
import pandas as pd
from scipy import stats

from liouville_fbm._fbm.hurst import HurstOrder
from liouville_fbm._frac.time_grid import TimeGrid


class Scheme(str, Enum):
    CHOLESKY = "cholesky"
    MOVING_AVERAGE = "moving_average"


@dataclass(frozen=True, eq=False)
class PathEnsemble:
    """
    ``values[r, i]`` is path ``r`` at node ``t_i`` (``i = 0..n``, with
    ``values[:, 0] == 0``). Path ``r`` depends only on ``(master_seed,
    coordinate, r)``.
    """

    grid: TimeGrid
    beta: HurstOrder
    values: np.ndarray
    master_seed: int
    scheme: Scheme
    kind: str = "liouville"
    coordinate: int = 0

    def __post_init__(self):
        if self.values.ndim != 2 or self.values.shape[1] != self.grid.n_nodes:
            raise ValueError(f"values must have shape (n_paths, {self.grid.n_nodes})")
        if self.values.shape[0] < 2:
            raise ValueError("an ensemble needs at least two paths")
        self.values.setflags(write=False)

    @property
    def n_paths(self) -> int:
        return self.values.shape[0]

    def increments(self) -> np.ndarray:
        """``(n_paths, n_cells)`` array of ``W(t_j) - W(t_{j-1})``."""
        return np.diff(self.values, axis=1)

    def sample_covariance(self) -> np.ndarray:
        """Uncentred second moments on the right nodes; the law is centred."""
        x = self.values[:, 1:]
        return x.T @ x / self.n_paths

    def moment_summary(self) -> pd.DataFrame:
        x = self.values[:, 1:]
        return pd.DataFrame({
            "t": self.grid.right_nodes(),
            "mean": x.mean(axis=0),
            "variance": x.var(axis=0, ddof=1),
            "skewness": stats.skew(x, axis=0),
            "excess_kurtosis": stats.kurtosis(x, axis=0),
        })

    def to_frame(self) -> pd.DataFrame:
        """Long format: one row per (path_id, t)."""
        n_paths, n_nodes = self.values.shape
        return pd.DataFrame({
            "path_id": np.repeat(np.arange(n_paths), n_nodes),
            "t": np.tile(self.grid.nodes(), n_paths),
            "value": self.values.reshape(-1),
        })

    def summary(self) -> Dict[str, Any]:
        moments = self.moment_summary()
        return {
            "seed": self.master_seed,
            "scheme": self.scheme.value,
            "kind": self.kind,
            "beta": self.beta.beta,
            "coordinate": self.coordinate,
            "n_paths": self.n_paths,
            "grid": self.grid.model_dump(),
            "moments": moments.to_dict(orient="list"),
        }
