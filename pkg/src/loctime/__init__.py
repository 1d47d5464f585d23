"""Local-time estimation: histogram occupation densities and the Fourier oracle."""

from .field import LocalTimeField, default_bin_width, local_time_field
from .fourier import CrossCheckResult, FourierLtQuery, fourier_local_time, localtime_cross_check
from .occupation import TEST_FUNCTIONS, get_test_function, occupation_residual

__all__ = [
    "CrossCheckResult",
    "FourierLtQuery",
    "LocalTimeField",
    "TEST_FUNCTIONS",
    "default_bin_width",
    "fourier_local_time",
    "get_test_function",
    "local_time_field",
    "localtime_cross_check",
    "occupation_residual",
]
