"""Increment-moment scaling: E|X_t - X_s|^p0 <= K |t - s|^(p0 * alpha)."""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Sequence, Tuple

import numpy as np
from scipy import stats

from ..core.errors import ValidationError
from .sample_path import SamplePath


logger = logging.getLogger(__name__)


MIN_LAGS = 4


@dataclass(frozen=True)
class MomentEstimate:
    """Fitted power law of the increment moments.

    Attributes:
        p0: Moment order.
        slope: Exponent of log mean |dX|^p0 against log lag.
        K_hat: Prefactor exp(intercept).
        lags: Lags (in time units) used in the fit.
        moments: Mean |dX|^p0 per lag.
    """

    p0: float
    slope: float
    K_hat: float
    lags: Tuple[float, ...]
    moments: Tuple[float, ...]

    @property
    def alpha_hat(self) -> float:
        """Implied regularity index slope / p0."""
        return self.slope / self.p0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p0": self.p0,
            "slope": self.slope,
            "K_hat": self.K_hat,
            "alpha_hat": self.alpha_hat,
            "lags": list(self.lags),
            "moments": list(self.moments),
        }


def moment_increment_slope(paths: Sequence[SamplePath], p0: float,
                           lags: Sequence[float]) -> MomentEstimate:
    """Estimate the increment-moment exponent by log-log least squares.

    Increments at each lag are pooled over all start points and all paths;
    vector-valued paths use the Euclidean norm.

    Args:
        paths: Sample paths on a common grid.
        p0: Moment order, >= 1.
        lags: At least four distinct lags, each a multiple of the grid spacing.

    Returns:
        MomentEstimate with slope and K_hat = exp(intercept).

    Raises:
        ValidationError: On too few lags, misaligned lags or p0 < 1.
    """
    if not paths:
        raise ValidationError("at least one path is required")
    if p0 < 1:
        raise ValidationError(f"p0 must be >= 1, got {p0}")
    distinct = sorted(set(float(lag) for lag in lags))
    if len(distinct) < MIN_LAGS:
        raise ValidationError(f"need at least {MIN_LAGS} distinct lags, got {len(distinct)}")

    spacing = paths[0].spacing
    n_points = paths[0].n_points
    shifts = []
    for lag in distinct:
        shift = int(round(lag / spacing))
        if shift < 1 or abs(shift * spacing - lag) > 1e-9 * max(1.0, lag):
            raise ValidationError(f"lag {lag} is not a positive multiple of the grid spacing {spacing}")
        if shift >= n_points:
            raise ValidationError(f"lag {lag} exceeds the path length")
        shifts.append(shift)

    moments = []
    for shift in shifts:
        pooled = [
            np.linalg.norm(path.values[shift:] - path.values[:-shift], axis=1) ** p0
            for path in paths
        ]
        moments.append(float(np.mean(np.concatenate(pooled))))
    if min(moments) <= 0:
        raise ValidationError("increment moments vanish; the paths are constant")

    fit = stats.linregress(np.log(distinct), np.log(moments))
    logger.debug(f"moment slope p0={p0}: {fit.slope:.4f} over {len(distinct)} lags")
    return MomentEstimate(
        p0=float(p0),
        slope=float(fit.slope),
        K_hat=float(np.exp(fit.intercept)),
        lags=tuple(distinct),
        moments=tuple(moments),
    )
