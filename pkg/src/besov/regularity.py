"""
Regularity verdicts read off dyadic profiles.

The slope of log2(2^(j nu) A_j) over the upper half of the levels decides
whether the (nu, p) seminorm stays bounded (slope <= tau), blows up
(slope > tau) or tends to zero, which places the function in the little
Besov space (slope <= -tau).
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Tuple

import numpy as np
from scipy import stats

from ..core.errors import ValidationError
from ..loctime.field import LocalTimeField, PathLike, path_arrays
from .localtime_stat import adler_statistic, grid_columns
from .profile import DyadicProfile, dyadic_profile


logger = logging.getLogger(__name__)


MIN_LEVELS = 6
DEFAULT_TAU = 0.1


@dataclass(frozen=True)
class RegularityVerdict:
    """Outcome of classify_regularity.

    Attributes:
        nu: Smoothness tested.
        nu_hat: Estimated critical exponent, nu - slope.
        slope: Least-squares slope of log2(2^(j nu) A_j) over the window.
        slope_stderr: Standard error of the slope.
        bounded: slope <= tau.
        blows_up: slope > tau.
        little_besov: slope <= -tau.
        tau: Threshold used.
        window: First and last level of the regression window.
    """

    nu: float
    nu_hat: float
    slope: float
    slope_stderr: float
    bounded: bool
    blows_up: bool
    little_besov: bool
    tau: float
    window: Tuple[int, int]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "nu": self.nu,
            "nu_hat": self.nu_hat,
            "slope": self.slope,
            "slope_stderr": self.slope_stderr,
            "bounded": self.bounded,
            "blows_up": self.blows_up,
            "little_besov": self.little_besov,
            "tau": self.tau,
            "window": list(self.window),
        }


def regression_window(profile: DyadicProfile) -> Tuple[int, int]:
    """Levels [ceil(J_max / 2), J_max] used for slope fits.

    Raises:
        ValidationError: If the profile has fewer than six levels.
    """
    if len(profile) < MIN_LEVELS:
        raise ValidationError(
            f"profile needs at least {MIN_LEVELS} levels, got {len(profile)}"
        )
    return math.ceil(profile.J_max / 2), profile.J_max


def _log2_window(profile: DyadicProfile) -> Tuple[np.ndarray, np.ndarray, Tuple[int, int]]:
    lo, hi = regression_window(profile)
    levels = np.arange(lo, hi + 1)
    values = profile.A[lo:hi + 1]
    if np.any(values <= 0):
        raise ValidationError(
            f"A_j vanishes in the regression window j in [{lo}, {hi}]"
        )
    return levels, np.log2(values), (lo, hi)


def classify_regularity(profile: DyadicProfile, nu: float,
                        tau: float = DEFAULT_TAU) -> RegularityVerdict:
    """Classify the (nu, p) dyadic seminorm of a profile.

    Args:
        profile: At least six levels.
        nu: Smoothness to test.
        tau: Slope threshold, > 0.

    Returns:
        RegularityVerdict with exactly one of bounded / blows_up set.

    Raises:
        ValidationError: On too few levels, tau <= 0 or a zero A_j in the window.
    """
    if tau <= 0:
        raise ValidationError(f"tau must be positive, got {tau}")
    levels, log_values, window = _log2_window(profile)
    fit = stats.linregress(levels, levels * nu + log_values)
    slope = float(fit.slope)
    stderr = float(fit.stderr) if np.isfinite(fit.stderr) else 0.0
    return RegularityVerdict(
        nu=float(nu),
        nu_hat=float(nu - slope),
        slope=slope,
        slope_stderr=stderr,
        bounded=slope <= tau,
        blows_up=slope > tau,
        little_besov=slope <= -tau,
        tau=float(tau),
        window=window,
    )


def estimate_exponent(profile: DyadicProfile) -> float:
    """nu_hat = -(slope of log2 A_j against j over the upper window).

    Raises:
        ValidationError: On too few levels or a zero A_j in the window.
    """
    levels, log_values, _ = _log2_window(profile)
    return float(-stats.linregress(levels, log_values).slope)


@dataclass(frozen=True)
class AdlerVerdict:
    """Local-time hypothesis against path conclusion for the Besov form of Adler's theorem.

    Attributes:
        mu: Local-time exponent.
        p: Path integrability exponent.
        hypothesis: Verdict of the local-time statistic at mu / d.
        path: Verdict of the path profile at (1 - mu) / d.
        hypothesis_holds: The local-time statistic stays bounded.
        conclusion_holds: The path is not in the little Besov space.
        consistent: The conclusion holds whenever the hypothesis does.
    """

    mu: float
    p: float
    hypothesis: RegularityVerdict
    path: RegularityVerdict

    @property
    def hypothesis_holds(self) -> bool:
        return self.hypothesis.bounded

    @property
    def conclusion_holds(self) -> bool:
        return not self.path.little_besov

    @property
    def consistent(self) -> bool:
        return (not self.hypothesis_holds) or self.conclusion_holds

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mu": self.mu,
            "p": self.p,
            "hypothesis": self.hypothesis.to_dict(),
            "path": self.path.to_dict(),
            "hypothesis_holds": self.hypothesis_holds,
            "conclusion_holds": self.conclusion_holds,
            "consistent": self.consistent,
        }


def adler_besov_check(path: PathLike, field: LocalTimeField, mu: float, p: float,
                      J_max: int, tau: float = DEFAULT_TAU) -> AdlerVerdict:
    """Check that a Besov-regular local time forces an irregular path.

    The local-time statistic is classified at mu / d and the path profile
    (same p) at (1 - mu) / d.
    """
    _, values = path_arrays(path)
    d = values.shape[1]
    n = grid_columns(field)
    if len(values) != n:
        raise ValidationError("path and field must share the time grid")
    hypothesis = classify_regularity(adler_statistic(field, mu, p, J_max, d=d), mu / d, tau)
    path_verdict = classify_regularity(dyadic_profile(values, p, J_max), (1.0 - mu) / d, tau)
    logger.debug(
        f"Adler check mu={mu}, p={p}: hypothesis slope {hypothesis.slope:.3f}, "
        f"path slope {path_verdict.slope:.3f}"
    )
    return AdlerVerdict(mu=float(mu), p=float(p), hypothesis=hypothesis, path=path_verdict)
