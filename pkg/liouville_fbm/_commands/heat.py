import logging
import math
from typing import Dict

import numpy as np

from liouville_fbm._commands.common import grid_of, write_document, write_frame
from liouville_fbm._core.command_registry import CommandContext, CommandRegistry
from liouville_fbm._core.errors import ConfigError
from liouville_fbm._integral.estimate import McEstimate
from liouville_fbm._io.json_writer import dumps
from liouville_fbm._io.report import CheckResult
from liouville_fbm._io.svg_plot import structure_function_svg
from liouville_fbm._spde.galerkin_model import GalerkinModel
from liouville_fbm._spde.mild_solution import MildSolutionPaths, simulate_mild
from liouville_fbm._spde.mode_kernel import mode_variance
from liouville_fbm._spde.regularity import monotone_in_beta, monotone_in_theta, regularity_lattice, structure_lags
from liouville_fbm._spde.threshold import existence_threshold_scan
from liouville_fbm._utilities.seed_service import SeedService

logger = logging.getLogger(__name__)


def _moment_checks(ctx: CommandContext, paths: MildSolutionPaths) -> None:
    model, grid = paths.model, paths.grid
    expected = paths.expected_norms()
    norms = paths.state_norms()
    frame = paths.mean_norm()
    frame["expected_norm_sq"] = expected
    write_frame(ctx, "mean_norm.csv", frame)
    for i in sorted({grid.n_cells // 2, grid.n_cells}):
        ctx.report.add(CheckResult.from_mean(
            f"mean_norm[t={grid.nodes()[i]:g}]", float(expected[i]), McEstimate.from_samples(norms[:, i]),
            ctx.z_threshold,
        ))
    lam, b = model.eigenvalues(), model.noise()
    for k in sorted({0, model.K - 1}):
        oracle = b[k] ** 2 * mode_variance(lam[k], grid.t_end, paths.beta)
        ctx.report.add(CheckResult.from_mean(
            f"mode_variance[k={k}]", oracle, McEstimate.from_samples(paths.modes[k, :, -1] ** 2), ctx.z_threshold,
            lam=float(lam[k]),
        ))
    ctx.report.add(CheckResult.from_mean("mode_mean[k=0]", 0.0, paths.mode_estimate(0, grid.n_cells), ctx.z_threshold))
    if model.K > 1 and model.initial is None:
        corr = float(np.corrcoef(paths.modes[0, :, -1], paths.modes[1, :, -1])[0, 1])
        ctx.report.add(CheckResult.statistical("mode_independence[0,1]", 0.0, corr, 1.0 / math.sqrt(paths.n_paths),
                                               ctx.z_threshold))
    propagator = model.propagator(grid.delta)
    ctx.report.add(CheckResult.condition("propagator_contraction", bool(np.all((propagator > 0) & (propagator < 1)))))


def _lattice_paths(ctx: CommandContext, paths: MildSolutionPaths) -> Dict[float, MildSolutionPaths]:
    """The simulated paths plus one fresh simulation per extra ``lattice_betas`` entry."""
    cfg = ctx.config
    by_beta = {paths.beta.beta: paths}
    for beta in cfg.lattice_betas:
        if beta not in by_beta:
            seed = SeedService.derive_seed(cfg.seed, "regularity", repr(beta))
            by_beta[beta] = simulate_mild(paths.model, paths.grid, beta, cfg.n_paths, seed)
    return by_beta


def _regularity(ctx: CommandContext, paths: MildSolutionPaths) -> None:
    cfg = ctx.config
    points = regularity_lattice(_lattice_paths(ctx, paths), cfg.thetas)
    rows, series = [], {}
    for point in points:
        if not point.finite:
            rows.append({"beta": point.beta, "theta": point.theta, "status": "divergent"})
            continue
        estimate = point.result
        rows.append({
            "status": "finite",
            **estimate.model_dump(),
            "estimate": estimate.estimate,
            "raw_estimate": estimate.raw_slope / 2.0,
            "target": estimate.target,
            "lower_bound": estimate.lower_bound,
            "passes": estimate.passes,
        })
        if point.beta == paths.beta.beta:
            series[point.theta] = (estimate.lags, estimate.structure)
        ctx.report.add(CheckResult.deterministic(
            f"regularity[beta={point.beta:g},theta={point.theta:g}]",
            max(0.0, estimate.lower_bound - estimate.estimate), 0.0,
            oracle=estimate.lower_bound, estimate=estimate.estimate, target=estimate.target,
        ))
    estimates = [[p.beta, p.theta, p.result.estimate] for p in points if p.finite]
    for name, verdict in (("regularity_monotone_in_theta", monotone_in_theta(points)),
                          ("regularity_monotone_in_beta", monotone_in_beta(points))):
        if verdict is not None:
            ctx.report.add(CheckResult.condition(name, verdict, estimates=estimates))
    write_document(ctx, "regularity.json", {"rows": rows})
    ctx.report.results["regularity"] = rows
    if cfg.plot and series:
        path = structure_function_svg(
            ctx.artifact("structure_function.svg"),
            series,
            title=f"d={cfg.d}, beta={cfg.beta:g}",
            description=dumps({"config": cfg.echo(), "version": ctx.report.version}).strip(),
        )
        ctx.report.record_artifact(path)


def _threshold(ctx: CommandContext) -> None:
    cfg = ctx.config
    (row,) = existence_threshold_scan(cfg.d, [cfg.beta], cfg.theta, cfg.K_list, cfg.T)
    ctx.report.results["threshold"] = {
        "classification": row.classification,
        "tail_exponent": row.tail_exponent,
        "expected_exponent": row.expected_exponent,
        "K_list": row.K_list,
        "partial_sums": row.partial_sums,
    }
    ctx.report.add(CheckResult.condition(
        "threshold_classification", row.consistent, classification=row.classification,
    ))


@CommandRegistry.register("heat")
def heat(ctx: CommandContext) -> None:
    """Simulate the spectral Galerkin heat equation and read off its regularity."""
    cfg = ctx.config
    grid = grid_of(ctx)
    if structure_lags(grid).size < 2:
        raise ConfigError(f"n_cells={cfg.n_cells} leaves fewer than two structure-function lags; use at least 32")
    model = GalerkinModel(d=cfg.d, K=cfg.K, theta=cfg.theta)
    paths = simulate_mild(model, grid, cfg.beta, cfg.n_paths, cfg.seed)
    _moment_checks(ctx, paths)
    _regularity(ctx, paths)
    _threshold(ctx)
