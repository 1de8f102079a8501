import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import pandas as pd
from scipy.linalg import toeplitz

from liouville_fbm._core.configuration import get_settings
from liouville_fbm._core.errors import MemoryBudgetError
from liouville_fbm._fbm.hurst import BetaLike, HurstOrder
from liouville_fbm._frac.time_grid import TimeGrid
from liouville_fbm._integral.estimate import McEstimate
from liouville_fbm._lmt.activity import Activity
from liouville_fbm._spde.galerkin_model import GalerkinModel
from liouville_fbm._spde.mode_kernel import ModeKernel
from liouville_fbm._utilities.numerics import ordered_map
from liouville_fbm._utilities.seed_service import SeedService

logger = logging.getLogger(__name__)


def required_memory_mb(n_modes: int, n_paths: int, n_nodes: int) -> float:
    return n_modes * n_paths * n_nodes * 8 / 2**20


@dataclass(frozen=True, eq=False)
class MildSolutionPaths:
    """
    ``modes[k, r, i]`` is the coefficient of eigenfunction ``k`` on path
    ``r`` at node ``t_i``; ``modes[:, :, 0]`` holds the initial condition.
    """

    model: GalerkinModel
    grid: TimeGrid
    beta: HurstOrder
    modes: np.ndarray
    master_seed: int

    @property
    def n_paths(self) -> int:
        return self.modes.shape[1]

    def state_norms(self, theta: Optional[float] = None) -> np.ndarray:
        """``(n_paths, n_nodes)`` array of ``||U(t_i)||_{E_theta}**2 = sum_k lambda_k**(2 theta) X_k(t_i)**2``."""
        weights = self.model.norm_weights(theta)
        return np.einsum("k,kri->ri", weights, self.modes**2)

    def norm_estimates(self, theta: Optional[float] = None) -> list:
        """One ``McEstimate`` of ``||U(t_i)||**2`` per node."""
        norms = self.state_norms(theta)
        return [McEstimate.from_samples(norms[:, i]) for i in range(self.grid.n_nodes)]

    def expected_norms(self, theta: Optional[float] = None) -> np.ndarray:
        """``E ||U(t_i)||**2`` from the modal variances and the deterministic part."""
        weights = self.model.norm_weights(theta)
        lam = self.model.eigenvalues()
        b2 = self.model.noise() ** 2
        x0 = self.model.initial_modes()
        nodes = self.grid.nodes()
        out = np.zeros(self.grid.n_nodes)
        for k, lam_k in enumerate(lam):
            squared, _ = ModeKernel(lam_k, self.beta).cell_integrals(self.grid)
            variances = np.concatenate([[0.0], np.cumsum(squared)])
            out += weights[k] * (b2[k] * variances + (np.exp(-lam_k * nodes) * x0[k]) ** 2)
        return out

    def mean_norm(self, theta: Optional[float] = None) -> pd.DataFrame:
        """``t``, sample mean of ``||U(t)||**2`` and its standard error."""
        norms = self.state_norms(theta)
        return pd.DataFrame({
            "t": self.grid.nodes(),
            "mean_norm_sq": norms.mean(axis=0),
            "std_error": norms.std(axis=0, ddof=1) / np.sqrt(self.n_paths),
        })

    def mode_estimate(self, mode: int, node: int) -> McEstimate:
        return McEstimate.from_samples(self.modes[mode, :, node])

    def structure_function(self, lags: Sequence[int], theta: Optional[float] = None, burn_in: float = 0.25) -> np.ndarray:
        """
        ``E ||U(t + h) - U(t)||_{E_theta}**2`` for ``h = lag * delta``,
        averaged over paths and over the nodes ``t >= burn_in * T``.
        """
        weights = self.model.norm_weights(theta)
        start = int(np.ceil(burn_in * self.grid.n_cells))
        out = []
        for lag in lags:
            if not 0 < lag <= self.grid.n_cells - start:
                raise ValueError(f"lag {lag} does not fit after the burn-in")
            diff = self.modes[:, :, start + lag:] - self.modes[:, :, start:-lag]
            out.append(float(np.einsum("k,kri->", weights, diff**2) / (diff.shape[1] * diff.shape[2])))
        return np.asarray(out)


def _mode_paths(
    lam: float,
    b: float,
    x0: float,
    mode: int,
    grid: TimeGrid,
    order: HurstOrder,
    n_paths: int,
    master_seed: int,
) -> np.ndarray:
    A = ModeKernel(lam, order).moving_average_weights(grid)
    xi = SeedService.standard_normals(master_seed, n_paths, grid.n_cells, "mode", mode)
    values = np.empty((n_paths, grid.n_nodes))
    values[:, 0] = 0.0
    values[:, 1:] = b * (xi @ toeplitz(A, np.zeros_like(A)).T)
    if x0 != 0.0:
        values += x0 * np.exp(-lam * grid.nodes())[None, :]
    return values


def simulate_mild(
    model: GalerkinModel,
    grid: TimeGrid,
    beta: BetaLike,
    n_paths: int,
    master_seed: int,
    workers: Optional[int] = None,
) -> MildSolutionPaths:
    """
    Modal coefficients of the mild solution on ``grid``.

    Mode ``k`` is ``X_k(t_i) = b_k sum_{j <= i} A^k_{i-j} xi_{k,j} + exp(-lambda_k t_i) x_k``
    with ``A^k`` the moving-average weights of its exponential kernel, so
    ``Var X_k(t_i)`` equals ``b_k**2 mode_variance(lambda_k, t_i)``. Noise of
    replicate ``r`` in mode ``k`` comes from stream ``(master_seed, "mode", k, r)``.
    """
    order = HurstOrder.of(beta)
    settings = get_settings()
    workers = settings.workers if workers is None else workers
    if grid.t_start != 0.0:
        raise ValueError("mild solutions start at t = 0")
    if n_paths < 2:
        raise ValueError("need at least two paths")
    needed = required_memory_mb(model.K, n_paths, grid.n_nodes)
    if needed > settings.max_memory_mb:
        raise MemoryBudgetError(
            f"{model.K} modes x {n_paths} paths x {grid.n_nodes} nodes needs {needed:.1f} MB, "
            f"budget is {settings.max_memory_mb:.1f} MB"
        )
    lam, b, x0 = model.eigenvalues(), model.noise(), model.initial_modes()
    with Activity("spde.simulate_mild", {"beta": order.beta, "K": model.K, "d": model.d,
                                         "n_cells": grid.n_cells, "n_paths": n_paths}):
        per_mode = ordered_map(
            lambda k: _mode_paths(lam[k], b[k], x0[k], k, grid, order, n_paths, master_seed),
            range(model.K),
            workers,
        )
    logger.info("simulated %d modes x %d paths on %d cells (%.1f MB)", model.K, n_paths, grid.n_cells, needed)
    modes = np.stack(per_mode)
    modes.setflags(write=False)
    return MildSolutionPaths(model=model, grid=grid, beta=order, modes=modes, master_seed=master_seed)
