"""Simulation of the example processes and increment-moment scaling."""

from .covariance import cov_bifbm, covariance_matrix, increment_covariance, increment_variance
from .descriptors import (
    ProcessDescriptor,
    ProcessKind,
    SheSpec,
    check_sigma,
    register_drift,
    register_sigma,
)
from .gaussian import sample_fbm_circulant, sample_gaussian_paths
from .grid import GridSpec
from .moments import MomentEstimate, moment_increment_slope
from .sample_path import SamplePath
from .samplers import get_sampler, sample_path, sample_paths
from .she import linear_she_variance, neumann_green_variance, solve_she, solve_she_ensemble

__all__ = [
    "GridSpec",
    "MomentEstimate",
    "ProcessDescriptor",
    "ProcessKind",
    "SamplePath",
    "SheSpec",
    "check_sigma",
    "cov_bifbm",
    "covariance_matrix",
    "get_sampler",
    "increment_covariance",
    "increment_variance",
    "linear_she_variance",
    "moment_increment_slope",
    "neumann_green_variance",
    "register_drift",
    "register_sigma",
    "sample_fbm_circulant",
    "sample_gaussian_paths",
    "sample_path",
    "sample_paths",
    "solve_she",
    "solve_she_ensemble",
]
