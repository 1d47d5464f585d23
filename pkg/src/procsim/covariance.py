"""Covariance functions of the Gaussian example processes."""

import logging
from functools import lru_cache

import numpy as np
import scipy.linalg

from ..core.errors import NumericalError, ValidationError

logger = logging.getLogger(__name__)


JITTER_LADDER = (0.0, 1e-14, 1e-12, 1e-10)


def validate_hurst(H: float) -> None:
    """Check H in (0, 1)."""
    if not (0.0 < H < 1.0):
        raise ValidationError(f"H must be in (0, 1), got {H}")


def validate_bifractional_index(K: float) -> None:
    """Check K in (0, 1]."""
    if not (0.0 < K <= 1.0):
        raise ValidationError(f"K must be in (0, 1], got {K}")


def validate_hk(H: float, K: float) -> None:
    """Check the bifractional parameter ranges H in (0,1), K in (0,1]."""
    validate_hurst(H)
    validate_bifractional_index(K)


def cov_bifbm(H: float, K: float, s, t):
    """Covariance of bifractional Brownian motion.

    2^{-K} [ (t^{2H} + s^{2H})^K - |t - s|^{2HK} ]. K = 1 is fractional
    Brownian motion and (H, K) = (1/2, 1) is standard Brownian motion.

    Args:
        H: Hurst-type parameter in (0, 1).
        K: Bifractional parameter in (0, 1].
        s: Time(s) >= 0, scalar or array.
        t: Time(s) >= 0, broadcastable with s.

    Returns:
        Covariance value(s), a float for scalar input.

    Raises:
        ValidationError: If a parameter is out of range or a time is negative.
    """
    validate_hk(H, K)
    s_arr = np.asarray(s, dtype=float)
    t_arr = np.asarray(t, dtype=float)
    if np.any(s_arr < 0) or np.any(t_arr < 0):
        raise ValidationError("times must be non-negative")
    value = (
        (t_arr ** (2 * H) + s_arr ** (2 * H)) ** K
        - np.abs(t_arr - s_arr) ** (2 * H * K)
    ) / 2.0 ** K
    if value.ndim == 0:
        return float(value)
    return value


def covariance_matrix(H: float, K: float, times: np.ndarray) -> np.ndarray:
    """Covariance matrix of B^{H,K} at the given times."""
    times = np.asarray(times, dtype=float)
    return cov_bifbm(H, K, times[:, None], times[None, :])


def increment_covariance(H: float, K: float, times: np.ndarray) -> np.ndarray:
    """Covariance matrix of the increments Y(t_j) - Y(t_{j-1}), with t_0 = 0.

    Args:
        times: Increasing times t_1 < ... < t_m.

    Returns:
        m x m covariance matrix.
    """
    points = np.concatenate([[0.0], np.asarray(times, dtype=float)])
    full = covariance_matrix(H, K, points)
    # Delta C Delta^T with Delta the first-difference operator
    diff = np.diff(np.eye(len(points)), axis=0)
    return diff @ full @ diff.T


def increment_variance(H: float, K: float, s, t):
    """Var(Y_t - Y_s) for the bifractional covariance."""
    return (
        cov_bifbm(H, K, t, t) + cov_bifbm(H, K, s, s) - 2.0 * cov_bifbm(H, K, s, t)
    )


def robust_cholesky(cov: np.ndarray, label: str = "") -> np.ndarray:
    """Lower Cholesky factor of a covariance matrix with the diagonal jitter ladder.

    Tries jitter 0, 1e-14, 1e-12, 1e-10 (relative to the mean diagonal)
    before giving up.

    Raises:
        NumericalError: If every jitter level fails.
    """
    scale = float(np.mean(np.diag(cov))) if len(cov) else 1.0
    eye = np.eye(len(cov))
    for jitter in JITTER_LADDER:
        try:
            factor = scipy.linalg.cholesky(
                cov + jitter * scale * eye, lower=True, check_finite=False
            )
        except scipy.linalg.LinAlgError:
            logger.debug(f"Cholesky failed with jitter {jitter:g} {label}")
            continue
        if jitter > 0:
            logger.debug(f"Cholesky succeeded with jitter {jitter:g} {label}")
        return factor
    raise NumericalError(
        f"covariance factorization failed {label} after jitter {JITTER_LADDER[-1]:g}"
    )


@lru_cache(maxsize=8)
def cholesky_factor(H: float, K: float, n_points: int, t_max: float) -> np.ndarray:
    """Lower Cholesky factor of the covariance on the grid without t = 0.

    Raises:
        NumericalError: If the matrix cannot be factorized; the message
            reports the grid size.
    """
    times = np.linspace(0.0, t_max, n_points)[1:]
    factor = robust_cholesky(
        covariance_matrix(H, K, times),
        label=f"on a grid of {n_points} points (H={H}, K={K})",
    )
    factor.flags.writeable = False
    return factor
