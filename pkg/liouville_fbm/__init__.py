from liouville_fbm._version import __version__
from liouville_fbm._frac.time_grid import TimeGrid
from liouville_fbm._frac.step_function import StepFunction
from liouville_fbm._frac.kernel import FracKernelMatrix, Side, apply, build_kernel, h_norm, solve_derivative
from liouville_fbm._fbm.hurst import HurstOrder
from liouville_fbm._fbm.covariance import CovMatrix, CovarianceKind, Normalization, cov_classical, cov_liouville
from liouville_fbm._fbm.ensemble import PathEnsemble, Scheme
from liouville_fbm._fbm.sampler import sample_cholesky, sample_moving_average, sample_paths
from liouville_fbm._integral.estimate import McEstimate
from liouville_fbm._integral.transform import IntegrandTransform
from liouville_fbm._integral.isometry import integrate_mc, isometry_norm, kernel_constant, kernel_variance
from liouville_fbm._integral.comparison import norm_equivalence_report
from liouville_fbm._cylindrical.finite_rank_map import FiniteRankMap
from liouville_fbm._cylindrical.operator_path import OperatorPath, SmoothOperatorPath
from liouville_fbm._cylindrical.ensemble import CylindricalEnsemble
from liouville_fbm._cylindrical.isometry import integrate_vector_mc, representation_norm
from liouville_fbm._cylindrical.conditions import domination_check, suff_condition_bound
from liouville_fbm._spde.galerkin_model import GalerkinModel
from liouville_fbm._spde.mode_kernel import mode_variance
from liouville_fbm._spde.mild_solution import MildSolutionPaths, simulate_mild
from liouville_fbm._spde.regularity import regularity_estimate, regularity_lattice
from liouville_fbm._spde.threshold import existence_threshold_scan
from liouville_fbm._core.configuration import get_configurations, load_configurations
from liouville_fbm._core.experiment_config import ExperimentConfig, load_experiment_config
from liouville_fbm._core.app import ExperimentApp
from liouville_fbm._lmt.activity import Activity

__all__ = [
    "__version__",
    "TimeGrid",
    "StepFunction",
    "FracKernelMatrix",
    "Side",
    "apply",
    "build_kernel",
    "h_norm",
    "solve_derivative",
    "HurstOrder",
    "CovMatrix",
    "CovarianceKind",
    "Normalization",
    "cov_classical",
    "cov_liouville",
    "PathEnsemble",
    "Scheme",
    "sample_cholesky",
    "sample_moving_average",
    "sample_paths",
    "McEstimate",
    "IntegrandTransform",
    "integrate_mc",
    "isometry_norm",
    "kernel_constant",
    "kernel_variance",
    "norm_equivalence_report",
    "FiniteRankMap",
    "OperatorPath",
    "SmoothOperatorPath",
    "CylindricalEnsemble",
    "integrate_vector_mc",
    "representation_norm",
    "domination_check",
    "suff_condition_bound",
    "GalerkinModel",
    "mode_variance",
    "MildSolutionPaths",
    "simulate_mild",
    "regularity_estimate",
    "regularity_lattice",
    "existence_threshold_scan",
    "get_configurations",
    "load_configurations",
    "ExperimentConfig",
    "load_experiment_config",
    "ExperimentApp",
    "Activity",
]
