import logging
import math

import numpy as np
import pandas as pd

from liouville_fbm._commands.common import grid_of, write_frame
from liouville_fbm._core.command_registry import CommandContext, CommandRegistry
from liouville_fbm._core.errors import ConfigError
from liouville_fbm._cylindrical.conditions import domination_check, suff_condition_bound
from liouville_fbm._cylindrical.ensemble import CylindricalEnsemble
from liouville_fbm._cylindrical.finite_rank_map import FiniteRankMap, ideal_property_check
from liouville_fbm._cylindrical.isometry import integrate_vector_mc, representation_norm, tensor_identity_check
from liouville_fbm._cylindrical.operator_path import OperatorPath, SmoothOperatorPath
from liouville_fbm._frac.step_function import StepFunction
from liouville_fbm._integral.isometry import isometry_norm
from liouville_fbm._io.report import CheckResult
from liouville_fbm._utilities.seed_service import SeedService

logger = logging.getLogger(__name__)

IDENTITY_TOLERANCE = 1e-12
MAX_SMOOTH_PATHS = 50
SINGULAR_POWER = 0.45


def _operator_path(ctx: CommandContext) -> OperatorPath:
    cfg = ctx.config
    if cfg.operator_path is not None:
        try:
            phi = OperatorPath.load_json(cfg.operator_path)
        except (OSError, ValueError, KeyError) as ex:
            raise ConfigError(f"cannot load operator path {cfg.operator_path}: {ex}") from ex
        if (phi.dim_state, phi.dim_noise) != (cfg.e, cfg.m):
            raise ConfigError(f"operator path is {phi.dim_state}x{phi.dim_noise}, config asks for e={cfg.e}, m={cfg.m}")
        return phi
    rng = SeedService.generator(cfg.seed, "operator-path")
    grid = grid_of(ctx)
    return OperatorPath(grid, rng.standard_normal((grid.n_cells, cfg.e, cfg.m)))


def _vector_isometry(ctx: CommandContext, phi: OperatorPath) -> None:
    cfg = ctx.config
    ensemble = CylindricalEnsemble.sample(phi.grid, cfg.beta, phi.dim_noise, cfg.n_paths, cfg.seed, cfg.scheme)
    integral = integrate_vector_mc(phi, ensemble)
    norm = representation_norm(phi, cfg.beta)
    ctx.report.add(CheckResult.from_mean("vector_isometry", norm**2, integral.squared_norm, ctx.z_threshold))
    for state in range(phi.dim_state):
        ctx.report.add(CheckResult.from_mean(
            f"coordinate_mean[{state}]", 0.0, integral.coordinate_estimate(state), ctx.z_threshold,
        ))
    ctx.report.add(CheckResult.statistical(
        "noise_independence", 0.0, ensemble.max_cross_correlation(), 1.0 / math.sqrt(ensemble.n_paths),
        ctx.z_threshold, m=ensemble.dim_noise,
    ))
    write_frame(ctx, "vector_integral.csv", pd.DataFrame(
        integral.outcomes, columns=[f"x{i}" for i in range(phi.dim_state)],
    ))
    ctx.report.results["representation_norm"] = norm
    ctx.report.results["mc_squared_norm"] = integral.squared_norm.model_dump()


def _identities(ctx: CommandContext, phi: OperatorPath) -> None:
    cfg = ctx.config
    rng = SeedService.generator(cfg.seed, "cylindrical", "identities")
    f = StepFunction(phi.grid, rng.standard_normal(phi.grid.n_cells))
    directions, _ = np.linalg.qr(rng.standard_normal((phi.dim_noise, phi.dim_noise)))
    states = rng.standard_normal((phi.dim_noise, phi.dim_state))
    lhs, rhs = tensor_identity_check(f, directions.T, states, cfg.beta)
    ctx.report.add(CheckResult.deterministic(
        "tensor_identity", abs(lhs - rhs) / rhs, IDENTITY_TOLERANCE, oracle=rhs, estimate=lhs,
    ))
    h, x = directions[:, 0], states[0]
    rank_one = representation_norm(OperatorPath.scalar(f, FiniteRankMap.rank_one(h, x)), cfg.beta)
    expected = isometry_norm(f, cfg.beta) * float(np.linalg.norm(x))
    ctx.report.add(CheckResult.deterministic(
        "rank_one", abs(rank_one - expected) / expected, IDENTITY_TOLERANCE, oracle=expected, estimate=rank_one,
    ))
    for k in range(3):
        left = FiniteRankMap.random(phi.dim_state, phi.dim_state, rng)
        middle = FiniteRankMap.random(phi.dim_state, phi.dim_noise, rng)
        right = FiniteRankMap.random(phi.dim_noise, phi.dim_noise, rng)
        composed, bound = ideal_property_check(left, middle, right)
        ctx.report.add(CheckResult.condition(
            f"ideal_property[{k}]", composed <= bound * (1.0 + 1e-12), composed=composed, bound=bound,
        ))


def _smooth_path(rng: np.random.Generator, e: int, m: int, horizon: float, curved: bool) -> SmoothOperatorPath:
    A = rng.standard_normal((e, m))
    S = rng.standard_normal((e, m))
    if curved:
        return SmoothOperatorPath(lambda t: A + t * t * S, lambda t: 2.0 * t * S, horizon)
    return SmoothOperatorPath(lambda t: A + t * S, lambda t: S, horizon)


def _conditions(ctx: CommandContext, phi: OperatorPath) -> None:
    cfg = ctx.config
    rng = SeedService.generator(cfg.seed, "cylindrical", "conditions")
    grid = grid_of(ctx)
    if cfg.beta < 0.5:
        bounds = []
        for k in range(min(cfg.n_functions, MAX_SMOOTH_PATHS)):
            result = suff_condition_bound(_smooth_path(rng, cfg.e, cfg.m, cfg.T, k % 2 == 1), cfg.beta, grid)
            bounds.append(result)
            ctx.report.add(CheckResult.condition(
                f"derivative_bound[{k}]", result.holds(), actual=result.actual, bound=result.bound,
            ))
        ctx.report.results["derivative_bound_slack"] = min(b.bound / b.actual for b in bounds)
    constant = domination_check(OperatorPath.constant(phi.grid, phi.map_at(phi.grid.n_cells - 1)), cfg.beta)
    ctx.report.add(CheckResult.condition("domination[constant]", constant.ordering_holds,
                                         liouville=constant.liouville_norm, brownian=constant.brownian_norm))
    domination = {"constant": {**constant.model_dump(), "ordering_holds": constant.ordering_holds}}
    ctx.report.results["domination"] = domination
    if cfg.beta > 0.5:
        alpha = cfg.alpha if 0.0 <= cfg.alpha < cfg.beta - 0.5 else 0.5 * (cfg.beta - 0.5)
        S = rng.standard_normal((cfg.e, cfg.m))
        singular = domination_check(lambda t: t**-SINGULAR_POWER * S, cfg.beta, grid, alpha)
        ctx.report.add(CheckResult.condition(
            "domination[singular]", singular.ordering_holds, alpha=alpha,
            weighted_norms=singular.weighted_norms, drift=singular.refinement_drift,
        ))
        domination["singular"] = {**singular.model_dump(), "ordering_holds": singular.ordering_holds}


@CommandRegistry.register("cylindrical")
def cylindrical(ctx: CommandContext) -> None:
    """Vector-valued integrals against cylindrical noise and their norm identities."""
    phi = _operator_path(ctx)
    _vector_isometry(ctx, phi)
    _identities(ctx, phi)
    _conditions(ctx, phi)
    logger.info("cylindrical checks done for e=%d, m=%d, beta=%s", phi.dim_state, phi.dim_noise, ctx.config.beta)
