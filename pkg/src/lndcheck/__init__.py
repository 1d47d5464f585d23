"""Local nondeterminism checks for the Gaussian descriptors."""

from .alpha_lnd import LndReport, SampleSpec, alphalnd_constant
from .berman import (
    BermanSweep,
    VarianceBounds,
    VarianceRefinement,
    berman_lnd_ratio,
    berman_lnd_sweep,
    variance_bounds_check,
    variance_bounds_refinement,
)
from .charfn import CharFnQuery, combination_variance, gaussian_charfn, montecarlo_charfn

__all__ = [
    "BermanSweep",
    "CharFnQuery",
    "LndReport",
    "SampleSpec",
    "VarianceBounds",
    "VarianceRefinement",
    "alphalnd_constant",
    "berman_lnd_ratio",
    "berman_lnd_sweep",
    "combination_variance",
    "gaussian_charfn",
    "montecarlo_charfn",
    "variance_bounds_check",
    "variance_bounds_refinement",
]
