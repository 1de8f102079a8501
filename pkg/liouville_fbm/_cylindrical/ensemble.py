from dataclasses import dataclass
from typing import List, Optional, Union

import numpy as np

from liouville_fbm._core.configuration import get_settings
from liouville_fbm._fbm.covariance import CovarianceKind, CovMatrix
from liouville_fbm._fbm.ensemble import PathEnsemble, Scheme
from liouville_fbm._fbm.hurst import BetaLike, HurstOrder
from liouville_fbm._fbm.sampler import sample_paths
from liouville_fbm._frac.time_grid import TimeGrid
from liouville_fbm._lmt.activity import Activity
from liouville_fbm._utilities.numerics import ordered_map


@dataclass(frozen=True, eq=False)
class CylindricalEnsemble:
    """
    ``m`` independent scalar Liouville ensembles, one per orthonormal noise
    direction. Coordinate ``k`` draws from streams ``(master_seed, k, r)``.
    """

    coordinates: List[PathEnsemble]

    def __post_init__(self):
        if not self.coordinates:
            raise ValueError("a cylindrical ensemble needs at least one coordinate")
        first = self.coordinates[0]
        for ens in self.coordinates[1:]:
            if ens.grid != first.grid or ens.beta != first.beta or ens.n_paths != first.n_paths:
                raise ValueError("coordinates of a cylindrical ensemble must share grid, beta and path count")

    @classmethod
    def sample(
        cls,
        grid: TimeGrid,
        beta: BetaLike,
        dim_noise: int,
        n_paths: int,
        master_seed: int,
        scheme: Union[Scheme, str] = Scheme.CHOLESKY,
        workers: Optional[int] = None,
    ) -> "CylindricalEnsemble":
        order = HurstOrder.of(beta)
        scheme = Scheme(scheme)
        workers = get_settings().workers if workers is None else workers
        with Activity("cylindrical.sample", {"beta": order.beta, "m": dim_noise, "n_paths": n_paths}):
            factor = None
            if scheme is Scheme.CHOLESKY:
                factor, _ = CovMatrix.build(grid, order, CovarianceKind.LIOUVILLE).cholesky()
            coordinates = ordered_map(
                lambda k: sample_paths(grid, order, scheme, n_paths, master_seed, coordinate=k, factor=factor),
                range(dim_noise),
                workers,
            )
        return cls(coordinates)

    @property
    def grid(self) -> TimeGrid:
        return self.coordinates[0].grid

    @property
    def beta(self) -> HurstOrder:
        return self.coordinates[0].beta

    @property
    def dim_noise(self) -> int:
        return len(self.coordinates)

    @property
    def n_paths(self) -> int:
        return self.coordinates[0].n_paths

    def increments(self) -> np.ndarray:
        """``(m, n_paths, n_cells)``."""
        return np.stack([ens.increments() for ens in self.coordinates])

    def max_cross_correlation(self) -> float:
        """Largest absolute sample correlation between distinct coordinates at the terminal node."""
        if self.dim_noise < 2:
            return 0.0
        terminal = np.stack([ens.values[:, -1] for ens in self.coordinates])
        corr = np.corrcoef(terminal)
        off = corr[~np.eye(self.dim_noise, dtype=bool)]
        return float(np.max(np.abs(off)))
