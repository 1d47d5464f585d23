"""
Characteristic function of increment combinations for Gaussian descriptors.

For times 0 = t_0 < t_1 < ... < t_m and frequencies v_j in R^d, the joint
characteristic function of the increments is

    E exp(i sum_j <v_j, X_{t_j} - X_{t_{j-1}}>) = exp(-1/2 sum_l v_l^T Sigma v_l),

with Sigma the increment covariance of one coordinate and v_l the l-th
column of the frequency matrix (coordinates are independent copies).
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np

from ..core.errors import UnsupportedError, ValidationError
from ..core.rng import substream
from ..procsim.covariance import increment_covariance, robust_cholesky
from ..procsim.descriptors import ProcessDescriptor


logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CharFnQuery:
    """Times, frequencies and exponents of one characteristic-function evaluation.

    Attributes:
        times: t_1 < ... < t_m in (0, 1]; t_0 = 0 is implicit.
        v: Frequencies, shape (m, d).
        k: Non-negative integer exponents, shape (m, d).
        alpha: LND index in (0, 1), if the query feeds an alpha-LND product.
    """

    times: np.ndarray
    v: np.ndarray
    k: Optional[np.ndarray] = None
    alpha: Optional[float] = None

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float).ravel()
        m = len(times)
        if m < 2:
            raise ValidationError(f"a query needs m >= 2 times, got {m}")
        if times[0] <= 0 or times[-1] > 1.0 or np.any(np.diff(times) <= 0):
            raise ValidationError("times must be strictly increasing in (0, 1]")
        v = np.asarray(self.v, dtype=float)
        if v.ndim == 1:
            v = v[:, None]
        if v.shape[0] != m:
            raise ValidationError(f"v must have {m} rows, got shape {v.shape}")
        k = np.zeros(v.shape, dtype=int) if self.k is None else np.asarray(self.k)
        if k.ndim == 1:
            k = k[:, None]
        if k.shape != v.shape:
            raise ValidationError(f"k must have shape {v.shape}, got {k.shape}")
        if np.any(k < 0):
            raise ValidationError("exponents k must be non-negative")
        if self.alpha is not None and not (0.0 < self.alpha < 1.0):
            raise ValidationError(f"alpha must be in (0, 1), got {self.alpha}")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "k", k.astype(int))

    @property
    def m(self) -> int:
        return len(self.times)

    @property
    def d(self) -> int:
        return self.v.shape[1]

    @property
    def gaps(self) -> np.ndarray:
        """t_j - t_{j-1} with t_0 = 0."""
        return np.diff(np.concatenate([[0.0], self.times]))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "times": self.times.tolist(),
            "v": self.v.tolist(),
            "k": self.k.tolist(),
            "alpha": self.alpha,
        }


def _require_gaussian(descriptor: ProcessDescriptor) -> Tuple[float, float]:
    if not descriptor.is_gaussian:
        raise UnsupportedError(
            f"{descriptor.kind.value} has no closed-form characteristic function"
        )
    return descriptor.hk


def combination_variance(query: CharFnQuery, descriptor: ProcessDescriptor) -> float:
    """Var(sum_j <v_j, X_{t_j} - X_{t_{j-1}}>)."""
    H, K = _require_gaussian(descriptor)
    sigma = increment_covariance(H, K, query.times)
    return float(np.einsum("jl,jk,kl->", query.v, sigma, query.v))


def gaussian_charfn(query: CharFnQuery, descriptor: ProcessDescriptor) -> float:
    """Modulus of the characteristic function, exp(-Var / 2).

    Raises:
        UnsupportedError: If the descriptor is not Gaussian.
    """
    return float(np.exp(-0.5 * max(combination_variance(query, descriptor), 0.0)))


def montecarlo_charfn(query: CharFnQuery, descriptor: ProcessDescriptor,
                      n_draws: int, seed: int) -> Tuple[float, float]:
    """Monte Carlo estimate of |E exp(i sum_j <v_j, dX_j>)| and its standard error.

    Increments are drawn exactly from their joint Gaussian law, one
    sub-stream per coordinate. The standard error uses the delta method
    on (mean cos, mean sin).

    Raises:
        UnsupportedError: If the descriptor is not Gaussian.
    """
    H, K = _require_gaussian(descriptor)
    if n_draws < 2:
        raise ValidationError(f"n_draws must be >= 2, got {n_draws}")
    factor = robust_cholesky(increment_covariance(H, K, query.times), label="for increments")
    phase = np.zeros(n_draws)
    for coord in range(query.d):
        normals = substream(seed, coord).standard_normal((query.m, n_draws))
        phase += query.v[:, coord] @ (factor @ normals)
    cos, sin = np.cos(phase), np.sin(phase)
    re, im = cos.mean(), sin.mean()
    modulus = float(np.hypot(re, im))
    if modulus > 0:
        gradient = np.array([re, im]) / modulus
        variance = gradient @ np.cov(np.vstack([cos, sin])) @ gradient / n_draws
    else:
        variance = (cos.var() + sin.var()) / (2 * n_draws)
    return modulus, float(np.sqrt(max(variance, 0.0)))
