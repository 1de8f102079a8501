import pandas as pd

from liouville_fbm._commands.common import write_frame
from liouville_fbm._core.command_registry import CommandContext, CommandRegistry
from liouville_fbm._core.errors import ConfigError
from liouville_fbm._io.report import CheckResult
from liouville_fbm._spde.threshold import existence_threshold_scan

EXPONENT_TOLERANCE = 0.15


@CommandRegistry.register("threshold-scan")
def threshold_scan(ctx: CommandContext) -> None:
    """Classify each beta as convergent or divergent from the modal tail."""
    cfg = ctx.config
    if max(cfg.K_list) < 8:
        raise ConfigError("K_list needs a largest cutoff of at least 8 modes")
    rows = existence_threshold_scan(cfg.d, sorted(cfg.betas), cfg.theta, cfg.K_list, cfg.T)
    records = []
    for row in rows:
        ctx.report.add(CheckResult.condition(
            f"classification[beta={row.beta:g}]", row.consistent,
            classification=row.classification, expected_convergent=row.expected_convergent,
        ))
        ctx.report.add(CheckResult.deterministic(
            f"tail_exponent[beta={row.beta:g}]", abs(row.tail_exponent - row.expected_exponent),
            ctx.tolerance(EXPONENT_TOLERANCE), oracle=row.expected_exponent, estimate=row.tail_exponent,
        ))
        records.extend(
            {"beta": row.beta, "K": K, "partial_sum": s, "classification": row.classification}
            for K, s in zip(row.K_list, row.partial_sums)
        )
    write_frame(ctx, "threshold_scan.csv", pd.DataFrame(records))
    ctx.report.results["rows"] = [
        {**row.model_dump(), "classification": row.classification, "expected_exponent": row.expected_exponent}
        for row in rows
    ]
