import logging
from typing import Sequence

import pandas as pd

from liouville_fbm._commands.common import grid_of, write_frame
from liouville_fbm._core.command_registry import CommandContext, CommandRegistry
from liouville_fbm._core.errors import ConfigError
from liouville_fbm._frac.step_function import StepFunction
from liouville_fbm._integral.comparison import (
    NormEquivalenceRow,
    load_golden,
    norm_equivalence_report,
    norm_ratios,
    record_golden,
)
from liouville_fbm._io.report import CheckResult

logger = logging.getLogger(__name__)

WIDENING_TOLERANCE = 0.10


def _golden_checks(ctx: CommandContext, rows: Sequence[NormEquivalenceRow]) -> None:
    cfg = ctx.config
    if cfg.golden_path is None:
        return
    if cfg.record_golden:
        record_golden(cfg.golden_path, rows, cfg.seed, ctx.report.version)
        logger.info("recorded %d golden brackets to %s", len(rows), cfg.golden_path)
        return
    try:
        golden = load_golden(cfg.golden_path)
    except (OSError, ValueError, KeyError) as ex:
        raise ConfigError(f"cannot read golden brackets {cfg.golden_path}: {ex}") from ex
    for row in rows:
        entry = golden.get((row.beta, row.n_cells))
        if entry is None:
            logger.warning("no golden bracket for beta=%s n_cells=%d", row.beta, row.n_cells)
            continue
        ctx.report.add(CheckResult.condition(
            f"bracket_golden[beta={row.beta:g}]", entry.admits(row), spread=row.spread, golden=entry.max_spread,
        ))


@CommandRegistry.register("norm-compare")
def norm_compare(ctx: CommandContext) -> None:
    """Brackets of the classical over the Liouville integrand norm for rough orders."""
    cfg = ctx.config
    if any(b >= 0.5 for b in cfg.betas):
        raise ConfigError(f"norm-compare needs every beta below 1/2, got {cfg.betas}")
    grid = grid_of(ctx)
    rows = norm_equivalence_report(sorted(cfg.betas), cfg.n_functions, cfg.seed, grid)
    for row in rows:
        ctx.report.add(CheckResult.condition(
            f"bracket_bounded[beta={row.beta:g}]", 0.0 < row.ratio_min <= row.ratio_max < float("inf"),
            ratio_min=row.ratio_min, ratio_max=row.ratio_max,
        ))
        ctx.report.add(CheckResult.deterministic(
            f"bracket_widening[beta={row.beta:g}]", row.widening, ctx.tolerance(WIDENING_TOLERANCE),
            estimate=row.doubled_spread, oracle=row.spread,
        ))
        indicator_ratio = float(norm_ratios(grid, row.beta, StepFunction.constant(grid).values)[0])
        ctx.report.add(CheckResult.condition(
            f"indicator_ratio_finite[beta={row.beta:g}]", 0.0 < indicator_ratio < float("inf"), ratio=indicator_ratio,
        ))
    _golden_checks(ctx, rows)
    frame = pd.DataFrame([{**row.model_dump(), "spread": row.spread, "widening": row.widening} for row in rows])
    write_frame(ctx, "norm_compare.csv", frame)
    ctx.report.results["rows"] = frame.to_dict(orient="records")
