import logging

import numpy as np
import pandas as pd
from scipy.special import gamma

from liouville_fbm._commands.common import grid_of, write_frame
from liouville_fbm._core.command_registry import CommandContext, CommandRegistry
from liouville_fbm._core.errors import ConfigError
from liouville_fbm._frac.kernel import (
    Side,
    apply,
    build_kernel,
    h_norm,
    norm_ratio_bracket,
    reconstruction_error,
    solve_derivative,
)
from liouville_fbm._frac.step_function import StepFunction, singular_power_averages
from liouville_fbm._frac.time_grid import TimeGrid
from liouville_fbm._io.report import CheckResult
from liouville_fbm._utilities.numerics import loglog_fit
from liouville_fbm._utilities.seed_service import SeedService

logger = logging.getLogger(__name__)

ROUND_TRIP_TOLERANCE = 1e-10
CLOSED_FORM_TOLERANCE = 1e-12
RECONSTRUCTION_CELLS = (64, 128, 256, 512, 1024)
RECONSTRUCTION_MIN_ORDER = 0.4


def _input_function(ctx: CommandContext, grid: TimeGrid) -> StepFunction:
    cfg = ctx.config
    if cfg.function == "ones":
        return StepFunction.constant(grid)
    if cfg.function == "indicator":
        return StepFunction.from_antiderivative(grid, lambda t: np.minimum(t, cfg.y))
    return singular_power_averages(grid, cfg.y, cfg.alpha) * (1.0 / gamma(1.0 - cfg.alpha))


def _relative_max_error(actual: np.ndarray, expected: np.ndarray) -> float:
    return float(np.max(np.abs(actual - expected)) / max(1.0, float(np.max(np.abs(expected)))))


def _reconstruction_study(ctx: CommandContext) -> None:
    cfg = ctx.config
    errors = [reconstruction_error(TimeGrid(t_end=cfg.T, n_cells=n), cfg.alpha, cfg.y) for n in RECONSTRUCTION_CELLS]
    write_frame(ctx, "reconstruction.csv", pd.DataFrame({"n_cells": RECONSTRUCTION_CELLS, "l2_error": errors}))
    slope, _ = loglog_fit(RECONSTRUCTION_CELLS, errors)
    order = -slope
    ctx.report.results["reconstruction"] = {"n_cells": list(RECONSTRUCTION_CELLS), "errors": errors, "order": order}
    if cfg.alpha >= 0.5:
        logger.info("reconstruction order %.3f recorded without a contract for alpha=%s", order, cfg.alpha)
        return
    ctx.report.add(CheckResult.condition(
        "reconstruction_monotone", all(b < a for a, b in zip(errors, errors[1:])), errors=errors,
    ))
    ctx.report.add(CheckResult.deterministic(
        "reconstruction_order", max(0.0, RECONSTRUCTION_MIN_ORDER - order), 0.0,
        oracle=RECONSTRUCTION_MIN_ORDER, estimate=order,
    ))


@CommandRegistry.register("frac-apply")
def frac_apply(ctx: CommandContext) -> None:
    """Apply a fractional integral, invert it, and study the indicator reconstruction."""
    cfg = ctx.config
    if not 0.0 < cfg.alpha < 1.0:
        raise ConfigError(f"frac-apply needs alpha in (0, 1), got {cfg.alpha}")
    grid = grid_of(ctx)
    side = Side(cfg.side)
    f = _input_function(ctx, grid)
    K = build_kernel(grid, cfg.alpha, side)
    image = apply(K, f)
    recovered = solve_derivative(K, image)

    write_frame(ctx, "frac_apply.csv", pd.DataFrame({
        "t": K.evaluation_nodes(),
        "f": f.values,
        "integral": image,
        "derivative_of_integral": recovered.values,
    }))

    ctx.report.add(CheckResult.deterministic(
        "round_trip", _relative_max_error(recovered.values, f.values), ctx.tolerance(ROUND_TRIP_TOLERANCE),
    ))
    if side is Side.RIGHT:
        mirrored = apply(build_kernel(grid, cfg.alpha, Side.LEFT), f.reverse())[::-1]
    else:
        mirrored = apply(build_kernel(grid, cfg.alpha, Side.RIGHT), f.reverse())[::-1]
    ctx.report.add(CheckResult.deterministic("reflection", _relative_max_error(image, mirrored), CLOSED_FORM_TOLERANCE))
    if cfg.function == "ones":
        t = K.evaluation_nodes()
        span = t - grid.t_start if side is Side.LEFT else grid.t_end - t
        closed = span**cfg.alpha / gamma(cfg.alpha + 1.0)
        ctx.report.add(CheckResult.deterministic(
            "power_rule", _relative_max_error(image, closed), CLOSED_FORM_TOLERANCE,
        ))

    ctx.report.results["h_norms"] = {
        "alpha": cfg.alpha,
        "positive": h_norm(f, cfg.alpha, side),
        "negative": h_norm(f, -cfg.alpha, side),
        "l2": f.l2_norm(),
    }
    if cfg.alpha < 0.5:
        rng = SeedService.generator(cfg.seed, "frac-apply", "bracket")
        low, high = norm_ratio_bracket(grid, cfg.alpha, rng.standard_normal((cfg.n_functions, grid.n_cells)))
        ctx.report.results["left_right_bracket"] = {"min": low, "max": high}
        ctx.report.add(CheckResult.condition("left_right_bracket_bounded", 0.0 < low <= high < np.inf,
                                             min=low, max=high))
    _reconstruction_study(ctx)
