from pathlib import Path
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from liouville_fbm._fbm.covariance import Normalization, cov_classical_matrix
from liouville_fbm._fbm.hurst import BetaLike, HurstOrder
from liouville_fbm._frac.step_function import StepFunction
from liouville_fbm._frac.time_grid import TimeGrid
from liouville_fbm._integral.transform import IntegrandTransform
from liouville_fbm._io.json_writer import read_json, write_json
from liouville_fbm._lmt.activity import Activity
from liouville_fbm._utilities.seed_service import SeedService


class NormEquivalenceRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    beta: float
    n_cells: int
    f_samples: int
    ratio_min: float
    ratio_max: float
    doubled_min: float
    doubled_max: float

    @property
    def spread(self) -> float:
        return self.ratio_max / self.ratio_min

    @property
    def doubled_spread(self) -> float:
        return self.doubled_max / self.doubled_min

    @property
    def widening(self) -> float:
        """Relative growth of ``max/min`` when the sample doubles."""
        return self.doubled_spread / self.spread - 1.0


def classical_gram(grid: TimeGrid, beta: BetaLike, normalization: Union[Normalization, str] = Normalization.UNHALVED) -> np.ndarray:
    """Covariance of the classical-fBm increments over the grid cells."""
    C = cov_classical_matrix(grid.nodes(), beta, normalization)
    return C[1:, 1:] - C[1:, :-1] - C[:-1, 1:] + C[:-1, :-1]


def classical_quadratic_form(f: StepFunction, beta: BetaLike, normalization: Union[Normalization, str] = Normalization.UNHALVED) -> float:
    """Variance of ``int f dW~`` for classical fBm with the chosen normalization."""
    return float(f.values @ classical_gram(f.grid, beta, normalization) @ f.values)


def norm_ratios(grid: TimeGrid, beta: BetaLike, coefficients: np.ndarray) -> np.ndarray:
    """Classical variance over Liouville variance, per row of ``coefficients``."""
    c = np.atleast_2d(coefficients)
    classical = np.einsum("ij,jk,ik->i", c, classical_gram(grid, beta), c)
    liouville = IntegrandTransform.build(grid, beta).norms(c) ** 2
    return classical / liouville


def norm_equivalence_report(
    betas: Sequence[float],
    f_samples: int,
    seed: int,
    grid: TimeGrid = TimeGrid(n_cells=64),
) -> List[NormEquivalenceRow]:
    """
    Ratio brackets of the classical to the Liouville integrand norm over
    random step functions. The doubled sample extends the first one, so its
    bracket can only widen.
    """
    rows = []
    for beta in betas:
        order = HurstOrder.of(beta)
        if order.beta >= 0.5:
            raise ValueError(f"integrand spaces are compared only for beta < 1/2, got {order.beta}")
        with Activity("integral.norm_equivalence", {"beta": order.beta, "f_samples": f_samples}):
            rng = SeedService.generator(seed, "norm-compare", repr(order.beta))
            coefficients = rng.standard_normal((2 * f_samples, grid.n_cells))
            ratios = norm_ratios(grid, order, coefficients)
        first = ratios[:f_samples]
        rows.append(NormEquivalenceRow(
            beta=order.beta,
            n_cells=grid.n_cells,
            f_samples=f_samples,
            ratio_min=float(first.min()),
            ratio_max=float(first.max()),
            doubled_min=float(ratios.min()),
            doubled_max=float(ratios.max()),
        ))
    return rows


class BracketGolden(BaseModel):
    """Recorded ceiling on ``max/min`` for one ``(beta, n_cells)`` bracket, with its provenance."""

    model_config = ConfigDict(frozen=True)

    beta: float
    n_cells: int
    f_samples: int
    seed: int
    version: str
    max_spread: float

    @property
    def key(self) -> Tuple[float, int]:
        return self.beta, self.n_cells

    def admits(self, row: NormEquivalenceRow) -> bool:
        return row.spread <= self.max_spread


def load_golden(path: Union[str, Path]) -> Dict[Tuple[float, int], BracketGolden]:
    document = read_json(path)
    entries = [BracketGolden.model_validate(entry) for entry in document["brackets"]]
    return {entry.key: entry for entry in entries}


def record_golden(path: Union[str, Path], rows: Sequence[NormEquivalenceRow], seed: int, version: str) -> Path:
    """Write the measured spreads of ``rows`` as the new golden brackets."""
    brackets = [
        BracketGolden(beta=row.beta, n_cells=row.n_cells, f_samples=row.f_samples, seed=seed,
                      version=version, max_spread=row.spread)
        for row in rows
    ]
    return write_json(path, {"brackets": brackets})
