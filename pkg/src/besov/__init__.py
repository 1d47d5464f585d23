"""Besov moduli, dyadic profiles, regularity verdicts and the GRR check."""

from .grr import GrrCase, grr_check, grr_sweep
from .localtime_stat import (
    adler_statistic,
    pointwise_localtime_profile,
    sandwich_ratios,
    shift_sup_statistic,
    uniform_localtime_statistic,
)
from .profile import (
    BesovNorm,
    DyadicProfile,
    besov_pq_norm,
    dyadic_profile,
    modulus_lp,
    seminorm_from_profile,
)
from .regularity import (
    AdlerVerdict,
    RegularityVerdict,
    adler_besov_check,
    classify_regularity,
    estimate_exponent,
)

__all__ = [
    "AdlerVerdict",
    "BesovNorm",
    "DyadicProfile",
    "GrrCase",
    "RegularityVerdict",
    "adler_besov_check",
    "adler_statistic",
    "besov_pq_norm",
    "classify_regularity",
    "dyadic_profile",
    "estimate_exponent",
    "grr_check",
    "grr_sweep",
    "modulus_lp",
    "pointwise_localtime_profile",
    "sandwich_ratios",
    "seminorm_from_profile",
    "shift_sup_statistic",
    "uniform_localtime_statistic",
]
