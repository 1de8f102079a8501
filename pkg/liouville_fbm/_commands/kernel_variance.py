import logging

import pandas as pd

from liouville_fbm._commands.common import write_frame
from liouville_fbm._core.command_registry import CommandContext, CommandRegistry
from liouville_fbm._integral.isometry import constant_drift, extracted_constant, kernel_constant, kernel_scaling
from liouville_fbm._io.report import CheckResult

logger = logging.getLogger(__name__)

SLOPE_TOLERANCE = 0.02
DRIFT_TOLERANCE = 0.01
CONSTANT_TOLERANCE = 0.05


@CommandRegistry.register("kernel-variance")
def kernel_variance(ctx: CommandContext) -> None:
    """Scaling of ``int_0^h (h-r)**(-alpha) dW(r)`` in the lag over an (alpha, beta) lattice."""
    cfg = ctx.config
    rows, lattice = [], []
    for beta in sorted(cfg.betas):
        for alpha in sorted(cfg.alphas):
            if not 0.0 <= alpha < min(beta + 0.5, 1.0):
                logger.info("skipping alpha=%s beta=%s: outside the admissible range", alpha, beta)
                continue
            if alpha >= beta:
                lattice.append({"alpha": alpha, "beta": beta, "status": "divergent"})
                continue
            scaling = kernel_scaling(alpha, beta)
            expected = beta - alpha
            closed = kernel_constant(alpha, beta)
            extracted = extracted_constant(alpha, beta, scaling["lags"][-1])
            drift = constant_drift(alpha, beta)
            ctx.report.add(CheckResult.deterministic(
                f"slope[alpha={alpha:g},beta={beta:g}]", abs(scaling["slope"] - expected),
                ctx.tolerance(SLOPE_TOLERANCE), oracle=expected, estimate=scaling["slope"],
            ))
            ctx.report.add(CheckResult.deterministic(
                f"constant_drift[alpha={alpha:g},beta={beta:g}]", drift, DRIFT_TOLERANCE,
            ))
            ctx.report.add(CheckResult.deterministic(
                f"constant[alpha={alpha:g},beta={beta:g}]", abs(extracted - closed) / closed, CONSTANT_TOLERANCE,
                oracle=closed, estimate=extracted,
            ))
            lattice.append({
                "alpha": alpha,
                "beta": beta,
                "status": "finite",
                "slope": scaling["slope"],
                "constant": closed,
                "extracted_constant": extracted,
                "drift": drift,
            })
            rows.extend(
                {"alpha": alpha, "beta": beta, "lag": h, "value": v}
                for h, v in zip(scaling["lags"], scaling["values"])
            )
    write_frame(ctx, "kernel_variance.csv", pd.DataFrame(rows, columns=["alpha", "beta", "lag", "value"]))
    ctx.report.results["lattice"] = lattice
