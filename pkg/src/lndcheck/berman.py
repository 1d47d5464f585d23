"""
Berman's local nondeterminism ratio and the two-sided increment variance bounds.

    Var(sum_j v_j (Y_{t_j} - Y_{t_{j-1}})) >= c_m sum_j v_j^2 Var(Y_{t_j} - Y_{t_{j-1}})

    c (t - s)^(2 alpha) <= Var(Y_t - Y_s) <= C (t - s)^(2 alpha)
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, NamedTuple, Sequence, Union

import numpy as np

from ..core.errors import ValidationError
from ..core.rng import substream
from ..procsim.covariance import cov_bifbm, increment_covariance, increment_variance
from ..procsim.descriptors import ProcessDescriptor
from ..procsim.grid import GridSpec
from .charfn import _require_gaussian


logger = logging.getLogger(__name__)


STABILITY_TOLERANCE = 0.01


def berman_lnd_ratio(descriptor: ProcessDescriptor, m: int, times: Sequence[float],
                     v: Sequence[float]) -> float:
    """Variance of an increment combination over the sum of the individual variances.

    Args:
        descriptor: Gaussian descriptor (one coordinate is used).
        m: Number of increments.
        times: t_1 < ... < t_m (t_0 = 0).
        v: Coefficients v_1..v_m.

    Raises:
        ValidationError: On mismatched lengths or a zero denominator.
    """
    H, K = _require_gaussian(descriptor)
    times = np.asarray(times, dtype=float)
    v = np.asarray(v, dtype=float)
    if len(times) != m or len(v) != m:
        raise ValidationError(f"times and v must both have length m={m}")
    if np.any(np.diff(np.concatenate([[0.0], times])) <= 0):
        raise ValidationError("times must be positive and strictly increasing")
    sigma = increment_covariance(H, K, times)
    denominator = float(np.sum(v ** 2 * np.diag(sigma)))
    if denominator <= 0:
        raise ValidationError("denominator vanishes: v must not be all zero")
    return float(v @ sigma @ v) / denominator


@dataclass(frozen=True)
class BermanSweep:
    """Extremes of the Berman ratio over random queries."""

    min_ratio: float
    max_ratio: float
    n_queries: int
    argmin: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "min_ratio": self.min_ratio,
            "max_ratio": self.max_ratio,
            "n_queries": self.n_queries,
            "argmin": self.argmin,
        }


def berman_lnd_sweep(descriptor: ProcessDescriptor, m: int, n_queries: int, seed: int,
                     window: float = 1.0) -> BermanSweep:
    """Berman ratios for random times (t_m - t_1 < window) and standard normal v.

    The minimum is the empirical c_m.
    """
    H, K = _require_gaussian(descriptor)
    if m < 2 or n_queries < 1:
        raise ValidationError("m must be >= 2 and n_queries positive")
    rng = substream(seed, m)
    first = rng.uniform(0.0, 1.0, n_queries)
    span = np.minimum(window, 1.0 - first)
    rest = np.sort(rng.uniform(0.0, 1.0, (n_queries, m - 1)), axis=1) * span[:, None]
    times = np.concatenate([first[:, None], first[:, None] + rest], axis=1)
    v = rng.standard_normal((n_queries, m))

    points = np.concatenate([np.zeros((n_queries, 1)), times], axis=1)
    full = cov_bifbm(H, K, points[:, :, None], points[:, None, :])
    diff = np.diff(np.eye(m + 1), axis=0)
    sigma = diff @ full @ diff.T
    numerator = np.einsum("nj,njk,nk->n", v, sigma, v)
    denominator = np.einsum("nj,njj->n", v ** 2, sigma)
    valid = denominator > 0
    ratios = numerator[valid] / denominator[valid]
    if len(ratios) == 0:
        raise ValidationError("every sampled query had a zero denominator")
    i = int(np.argmin(ratios))
    logger.info(f"Berman ratio for {descriptor.label()}, m={m}: min {ratios[i]:.6g} "
                f"over {len(ratios)} queries")
    return BermanSweep(
        min_ratio=float(ratios[i]),
        max_ratio=float(ratios.max()),
        n_queries=int(len(ratios)),
        argmin={"times": times[valid][i].tolist(), "v": v[valid][i].tolist()},
    )


class VarianceBounds(NamedTuple):
    """Smallest and largest Var(Y_t - Y_s) / (t - s)^(2 alpha) over the pairs."""

    c_hat: float
    C_hat: float


def variance_bounds_check(descriptor: ProcessDescriptor, alpha: float,
                          grid: Union[GridSpec, Sequence[float]]) -> VarianceBounds:
    """Empirical constants of the two-sided variance bound over all pairs s < t of a grid.

    Raises:
        ValidationError: If the grid has fewer than two points.
    """
    H, K = _require_gaussian(descriptor)
    times = grid.times if isinstance(grid, GridSpec) else np.asarray(grid, dtype=float)
    if len(times) < 2:
        raise ValidationError("the pair grid is empty: need at least two times")
    i, j = np.triu_indices(len(times), k=1)
    s, t = times[i], times[j]
    ratios = increment_variance(H, K, s, t) / (t - s) ** (2.0 * alpha)
    return VarianceBounds(float(ratios.min()), float(ratios.max()))


@dataclass(frozen=True)
class VarianceRefinement:
    """Variance-bound constants on nested dyadic grids.

    Attributes:
        levels: Grid levels J (2^J + 1 points).
        c_hats: c_hat per level.
        C_hats: C_hat per level.
        mismatch: c_hat keeps shrinking or C_hat keeps growing by more than
            1% over the last two refinements; alpha is not the true exponent.
    """

    alpha: float
    levels: List[int]
    c_hats: List[float]
    C_hats: List[float]
    mismatch: bool

    @property
    def stable(self) -> bool:
        return not self.mismatch

    def to_dict(self) -> Dict[str, Any]:
        return {
            "alpha": self.alpha,
            "levels": self.levels,
            "c_hats": self.c_hats,
            "C_hats": self.C_hats,
            "mismatch": self.mismatch,
        }


def variance_bounds_refinement(descriptor: ProcessDescriptor, alpha: float,
                               levels: Sequence[int] = (4, 6, 8, 10)) -> VarianceRefinement:
    """Run variance_bounds_check on grids of increasing level and flag drift."""
    if len(levels) < 3:
        raise ValidationError("need at least three refinement levels")
    bounds = [variance_bounds_check(descriptor, alpha, GridSpec.from_level(L)) for L in levels]
    c_hats = [b.c_hat for b in bounds]
    C_hats = [b.C_hat for b in bounds]

    def drifting(values: List[float], sign: float) -> bool:
        changes = [
            sign * (values[i + 1] - values[i]) / abs(values[i])
            for i in (len(values) - 3, len(values) - 2)
        ]
        return all(change > STABILITY_TOLERANCE for change in changes)

    mismatch = drifting(c_hats, -1.0) or drifting(C_hats, 1.0)
    if mismatch:
        logger.warning(f"variance bounds drift under refinement for alpha={alpha}: "
                       f"c_hat={c_hats}, C_hat={C_hats}")
    return VarianceRefinement(
        alpha=float(alpha),
        levels=list(levels),
        c_hats=c_hats,
        C_hats=C_hats,
        mismatch=mismatch,
    )
