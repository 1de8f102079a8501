import logging

import numpy as np
import pandas as pd

from liouville_fbm._commands.common import grid_of, write_frame
from liouville_fbm._core.command_registry import CommandContext, CommandRegistry
from liouville_fbm._fbm.covariance import cov_liouville_closed
from liouville_fbm._fbm.hurst import HurstOrder
from liouville_fbm._fbm.ensemble import Scheme
from liouville_fbm._fbm.sampler import moving_average_increment_covariance, sample_paths
from liouville_fbm._frac.step_function import StepFunction
from liouville_fbm._frac.time_grid import TimeGrid
from liouville_fbm._integral.estimate import McEstimate
from liouville_fbm._integral.isometry import isometry_norm
from liouville_fbm._integral.transform import IntegrandTransform
from liouville_fbm._io.report import CheckResult
from liouville_fbm._lmt.activity import Activity
from liouville_fbm._utilities.seed_service import SeedService

logger = logging.getLogger(__name__)

EXACT_TOLERANCE = 1e-12
QUADRATURE_TOLERANCE = 1e-6


def _example_rows(ctx: CommandContext, grid: TimeGrid) -> None:
    """Closed-form cases: the full indicator, the Brownian reduction and the explicit transform."""
    cfg = ctx.config
    rng = SeedService.generator(cfg.seed, "isometry", "examples")
    for beta in cfg.betas:
        order = HurstOrder.of(beta)
        norm_sq = isometry_norm(StepFunction.constant(grid), order) ** 2
        oracle = float(cov_liouville_closed(grid.t_end, grid.t_end, order))
        ctx.report.add(CheckResult.deterministic(
            f"indicator_norm[beta={beta:g}]", abs(norm_sq - oracle) / oracle, 1e-10, oracle=oracle, estimate=norm_sq,
        ))
    f = StepFunction(grid, rng.standard_normal(grid.n_cells))
    brownian = isometry_norm(f, 0.5)
    ctx.report.add(CheckResult.deterministic(
        "brownian_reduction", abs(brownian - f.l2_norm()) / f.l2_norm(), EXACT_TOLERANCE,
        oracle=f.l2_norm(), estimate=brownian,
    ))
    rough = [b for b in cfg.betas if b < 0.5]
    if rough:
        a = grid.nodes()[grid.n_cells // 4]
        b = grid.nodes()[(3 * grid.n_cells) // 4]
        g = StepFunction.indicator(grid, a, b) if a < b else StepFunction.constant(grid)
        transform = IntegrandTransform.build(grid, rough[0])
        gram_norm, explicit_norm = transform.norm(g), transform.explicit_norm(g)
        ctx.report.add(CheckResult.deterministic(
            f"explicit_transform[beta={rough[0]:g}]", abs(gram_norm - explicit_norm) / explicit_norm,
            QUADRATURE_TOLERANCE, oracle=explicit_norm, estimate=gram_norm,
        ))



def _scheme_variances(
    grid: TimeGrid, order: HurstOrder, scheme: Scheme, coefficients: np.ndarray, liouville: np.ndarray,
) -> np.ndarray:
    """Variance of each integral under the law the ensemble was drawn from."""
    if scheme is Scheme.CHOLESKY:
        return liouville
    M = moving_average_increment_covariance(grid, order)
    return np.einsum("fi,ij,fj->f", coefficients, M, coefficients)


def _cross_scheme_row(order: HurstOrder, scheme: str, oracle: np.ndarray, liouville: np.ndarray) -> dict:
    # informational: the sampler law against the exact Liouville law
    relative = (oracle - liouville) / liouville
    return {
        "beta": order.beta,
        "scheme": scheme,
        "max_abs_relative_bias": float(np.max(np.abs(relative))),
        "mean_relative_bias": float(np.mean(relative)),
    }


@CommandRegistry.register("isometry")
def isometry(ctx: CommandContext) -> None:
    """Monte Carlo variance of step-function integrals against the isometry norm."""
    cfg = ctx.config
    grid = grid_of(ctx)
    rows, bias = [], []
    for beta in cfg.betas:
        order = HurstOrder.of(beta)
        with Activity("command.isometry", {"beta": order.beta, "n_functions": cfg.n_functions}):
            ensemble_seed = SeedService.derive_seed(cfg.seed, "isometry", repr(order.beta))
            ensemble = sample_paths(grid, order, cfg.scheme, cfg.n_paths, ensemble_seed)
            rng = SeedService.generator(cfg.seed, "integrands", repr(order.beta))
            coefficients = rng.standard_normal((cfg.n_functions, grid.n_cells))
            liouville = IntegrandTransform.build(grid, order).norms(coefficients) ** 2
            oracle = _scheme_variances(grid, order, Scheme(cfg.scheme), coefficients, liouville)
            outcomes = ensemble.increments() @ coefficients.T
        for i in range(cfg.n_functions):
            mc = McEstimate.from_samples(outcomes[:, i])
            check = ctx.report.add(CheckResult.from_variance(
                f"isometry[beta={beta:g},f={i}]", float(oracle[i]), mc, ctx.z_threshold,
            ))
            rows.append({
                "beta": order.beta,
                "function": i,
                "n_paths": mc.n_paths,
                "mc_variance": mc.variance,
                "oracle_variance": float(oracle[i]),
                "liouville_variance": float(liouville[i]),
                "z_score": check.z_score,
            })
        bias.append(_cross_scheme_row(order, cfg.scheme, oracle, liouville))
        logger.info("isometry battery beta=%s: %d functions, %s bias %.3g against Liouville",
                    beta, cfg.n_functions, cfg.scheme, bias[-1]["max_abs_relative_bias"])
    _example_rows(ctx, grid)
    write_frame(ctx, "isometry.csv", pd.DataFrame(rows))
    ctx.report.results["rows"] = rows
    ctx.report.results["cross_scheme"] = bias
    ctx.report.results["max_abs_z"] = float(np.max(np.abs([r["z_score"] for r in rows])))
