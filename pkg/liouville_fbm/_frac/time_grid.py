import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class TimeGrid(BaseModel):
    """
    Uniform partition of ``[t_start, t_end]`` into ``n_cells`` cells.

    Cell ``j`` (1-based) covers ``(t_{j-1}, t_j]``. Grids are immutable and
    hashable, so they can key caches of kernel and Gram matrices.
    """

    model_config = ConfigDict(frozen=True)

    t_start: float = Field(default=0.0, ge=0)
    t_end: float = 1.0
    n_cells: int = Field(gt=0)

    @model_validator(mode="after")
    def _ordered(self) -> "TimeGrid":
        if not self.t_end > self.t_start:
            raise ValueError("t_end must be greater than t_start")
        return self

    @property
    def delta(self) -> float:
        return (self.t_end - self.t_start) / self.n_cells

    @property
    def n_nodes(self) -> int:
        return self.n_cells + 1

    @property
    def length(self) -> float:
        return self.t_end - self.t_start

    def nodes(self) -> np.ndarray:
        """All nodes ``t_0 .. t_n``; the last node is exactly ``t_end``."""
        out = self.t_start + self.delta * np.arange(self.n_cells + 1)
        out[-1] = self.t_end
        return out

    def left_nodes(self) -> np.ndarray:
        return self.nodes()[:-1]

    def right_nodes(self) -> np.ndarray:
        return self.nodes()[1:]

    def refine(self, factor: int = 2) -> "TimeGrid":
        return TimeGrid(t_start=self.t_start, t_end=self.t_end, n_cells=self.n_cells * factor)

    def restrict(self, n_cells: int) -> "TimeGrid":
        """Grid of the first ``n_cells`` cells, i.e. ``(t_start, t_n]``."""
        if not 0 < n_cells <= self.n_cells:
            raise ValueError(f"cannot restrict {self.n_cells} cells to {n_cells}")
        return TimeGrid(t_start=self.t_start, t_end=self.t_start + n_cells * self.delta, n_cells=n_cells)

    def extend(self, extra_cells: int) -> "TimeGrid":
        if extra_cells < 0:
            raise ValueError("extra_cells must be >= 0")
        n = self.n_cells + extra_cells
        return TimeGrid(t_start=self.t_start, t_end=self.t_start + n * self.delta, n_cells=n)

    def node_index(self, t: float, tol: float = 1e-9) -> int:
        """Index of the node equal to ``t``; raises when ``t`` is off-grid."""
        position = (t - self.t_start) / self.delta
        index = int(round(position))
        if abs(position - index) > tol or not 0 <= index <= self.n_cells:
            raise ValueError(f"{t} is not a node of {self}")
        return index
