import logging
import math

import numpy as np

from liouville_fbm._commands.common import grid_of, write_frame
from liouville_fbm._core.command_registry import CommandContext, CommandRegistry
from liouville_fbm._fbm.covariance import CovarianceKind, CovMatrix
from liouville_fbm._fbm.ensemble import Scheme
from liouville_fbm._fbm.sampler import moving_average_covariance, sample_paths
from liouville_fbm._integral.estimate import McEstimate
from liouville_fbm._io.report import CheckResult

logger = logging.getLogger(__name__)


def _check_nodes(n_cells: int) -> list:
    """Right-node indices of ``T/4``, ``T/2`` and ``T`` (deduplicated on tiny grids)."""
    return sorted({max(n_cells // 4, 1) - 1, max(n_cells // 2, 1) - 1, n_cells - 1})


@CommandRegistry.register("fbm-sample")
def fbm_sample(ctx: CommandContext) -> None:
    """Sample an fBm ensemble and check its second moments against the covariance."""
    cfg = ctx.config
    grid = grid_of(ctx)
    scheme = Scheme(cfg.scheme)
    kind = CovarianceKind(cfg.kind)
    ensemble = sample_paths(grid, cfg.beta, scheme, cfg.n_paths, cfg.seed, kind=kind, normalization=cfg.normalization)
    cov = CovMatrix.build(grid, cfg.beta, kind, cfg.normalization)
    law = cov.entries if scheme is Scheme.CHOLESKY else moving_average_covariance(grid, cfg.beta)

    write_frame(ctx, "paths.csv", ensemble.to_frame())
    moments = ensemble.moment_summary()
    moments["oracle_variance"] = np.diag(cov.entries)
    write_frame(ctx, "moments.csv", moments)

    x = ensemble.values[:, 1:]
    times = grid.right_nodes()
    nodes = _check_nodes(grid.n_cells)
    for i in nodes:
        ctx.report.add(CheckResult.from_mean(
            f"second_moment[t={times[i]:g}]", float(cov.entries[i, i]),
            McEstimate.from_samples(x[:, i] ** 2), ctx.z_threshold,
        ))
        ctx.report.add(CheckResult.from_mean(
            f"mean[t={times[i]:g}]", 0.0, McEstimate.from_samples(x[:, i]), ctx.z_threshold,
        ))
    if len(nodes) > 1:
        i, j = nodes[-2], nodes[-1]
        ctx.report.add(CheckResult.from_mean(
            f"cross_moment[s={times[i]:g},t={times[j]:g}]", float(law[i, j]),
            McEstimate.from_samples(x[:, i] * x[:, j]), ctx.z_threshold,
            covariance=float(cov.entries[i, j]),
        ))

    if kind is CovarianceKind.LIOUVILLE:
        other_scheme = Scheme.MOVING_AVERAGE if scheme is Scheme.CHOLESKY else Scheme.CHOLESKY
        other = sample_paths(grid, cfg.beta, other_scheme, cfg.n_paths, cfg.seed, coordinate=1)
        this_var = McEstimate.from_samples(x[:, -1])
        other_var = McEstimate.from_samples(other.values[:, -1])
        ctx.report.add(CheckResult.statistical(
            f"terminal_variance[{scheme.value} vs {other_scheme.value}]",
            other_var.variance,
            this_var.variance,
            math.hypot(this_var.variance_std_error, other_var.variance_std_error),
            ctx.z_threshold,
            oracle_variance=float(cov.entries[-1, -1]),
        ))

    ctx.report.results["ensemble"] = {k: v for k, v in ensemble.summary().items() if k != "moments"}
    logger.info("sampled %d %s paths (beta=%s, %s)", ensemble.n_paths, kind.value, cfg.beta, scheme.value)
