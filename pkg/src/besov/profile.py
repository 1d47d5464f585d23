"""
Moduli of continuity and dyadic Besov profiles of sampled functions.

A function on I = [0, 1] is given by its samples at i / (n - 1). For a
grid-representable shift h = m / (n - 1) the discrete L^p norm of
x -> f(x + h) - f(x) over I(h) = {x : x + h in I} is the rectangle sum

    ( sum_{i=0}^{n-2-m} |f_{i+m} - f_i|^p / (n - 1) )^(1/p),

whose weights add up to exactly 1 - h. Dyadic shifts 2^-j are grid aligned
because n - 1 is a power of two.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, NamedTuple, Optional, Sequence

import numpy as np

from ..core.errors import ValidationError


logger = logging.getLogger(__name__)


VARIANTS = {"path", "localtime_uniform", "localtime_pointwise", "localtime_adler", "synthetic"}


def as_samples(f_samples) -> np.ndarray:
    """Samples as an (n, d) float array."""
    samples = np.asarray(f_samples, dtype=float)
    if samples.ndim == 1:
        samples = samples[:, None]
    if samples.ndim != 2 or len(samples) < 2:
        raise ValidationError("f_samples must hold at least two samples")
    if not np.all(np.isfinite(samples)):
        raise ValidationError("f_samples must be finite")
    return samples


def _check_p(p: float) -> None:
    if not np.isfinite(p) or p < 1:
        raise ValidationError(f"p must be in [1, inf), got {p}")


def shift_norm(samples: np.ndarray, m: int, p: float) -> float:
    """Discrete L^p(I(h)) norm of the increments at shift m grid steps."""
    n = len(samples)
    if m <= 0:
        return 0.0
    if m >= n - 1:
        return 0.0
    increments = np.linalg.norm(samples[m:] - samples[:-m], axis=1)[: n - 1 - m]
    delta = 1.0 / (n - 1)
    return float((delta * np.sum(increments ** p)) ** (1.0 / p))


def modulus_lp(f_samples, p: float, t: float) -> float:
    """L^p modulus of continuity: sup over grid shifts h <= t of the increment norm.

    Args:
        f_samples: Samples on the uniform grid of [0, 1], shape (n,) or (n, d).
        p: Integrability exponent >= 1.
        t: Shift bound in [0, 1].

    Returns:
        omega_p(f, t).

    Raises:
        ValidationError: If t is negative or p < 1.
    """
    _check_p(p)
    if t < 0:
        raise ValidationError(f"t must be non-negative, got {t}")
    samples = as_samples(f_samples)
    n = len(samples)
    max_shift = min(int(np.floor(t * (n - 1) + 1e-9)), n - 1)
    if max_shift < 1:
        return 0.0
    return max(shift_norm(samples, m, p) for m in range(1, max_shift + 1))


@dataclass(frozen=True, eq=False)
class DyadicProfile:
    """Per-level dyadic increment norms.

    Attributes:
        A: A_j for levels 0..J_max.
        p: Integrability exponent of the norms.
        variant: "path", "localtime_uniform", "localtime_pointwise",
            "localtime_adler" or "synthetic".
        S: Uniform local-time statistic S_j (localtime_uniform only).
        q: Summability exponent used for S_j.
        nu: Smoothness used for S_j.
        direct: Direct-form values of S_j, for cross-validation.
        metadata: Free-form provenance.
    """

    A: np.ndarray
    p: float = 1.0
    variant: str = "path"
    S: Optional[np.ndarray] = None
    q: Optional[float] = None
    nu: Optional[float] = None
    direct: Optional[np.ndarray] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        values = np.asarray(self.A, dtype=float).ravel()
        if np.any(values < 0) or not np.all(np.isfinite(values)):
            raise ValidationError("profile values A_j must be finite and non-negative")
        if self.variant not in VARIANTS:
            raise ValidationError(f"Unknown profile variant: {self.variant}")
        object.__setattr__(self, "A", values)
        for name in ("S", "direct"):
            extra = getattr(self, name)
            if extra is not None:
                extra = np.asarray(extra, dtype=float).ravel()
                if len(extra) != len(values):
                    raise ValidationError(f"{name} must have one value per level")
                object.__setattr__(self, name, extra)

    @classmethod
    def from_values(cls, values: Sequence[float], p: float = 1.0) -> "DyadicProfile":
        """Profile from given A_j values (levels 0, 1, ...)."""
        return cls(A=np.asarray(values, dtype=float), p=p, variant="synthetic")

    @property
    def levels(self) -> np.ndarray:
        return np.arange(len(self.A))

    @property
    def J_max(self) -> int:
        return len(self.A) - 1

    def __len__(self) -> int:
        return len(self.A)

    def rows(self) -> List[List[Any]]:
        """CSV rows ``j, A_j[, S_j]``."""
        rows = []
        for j, a in enumerate(self.A):
            row: List[Any] = [int(j), float(a)]
            if self.S is not None:
                row.append(float(self.S[j]))
            rows.append(row)
        return rows

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "variant": self.variant,
            "p": self.p,
            "A": [float(a) for a in self.A],
        }
        if self.S is not None:
            data["S"] = [float(s) for s in self.S]
            data["q"] = self.q
            data["nu"] = self.nu
        if self.direct is not None:
            data["direct"] = [float(s) for s in self.direct]
        if self.metadata:
            data["metadata"] = dict(self.metadata)
        return data


def check_dyadic_levels(n_points: int, J_max: int) -> None:
    """Raise unless every dyadic shift 2^-j, j <= J_max, is a whole number of grid steps."""
    steps = n_points - 1
    if J_max < 0:
        raise ValidationError(f"J_max must be non-negative, got {J_max}")
    if steps < 1 or steps % (2 ** J_max) != 0:
        raise ValidationError(
            f"J_max={J_max} is not aligned with a grid of {n_points} points "
            f"(2^J_max must divide {steps})"
        )


def dyadic_profile(f_samples, p: float, J_max: int) -> DyadicProfile:
    """Dyadic increment norms A_j = ||f(. + 2^-j) - f||_{L^p(I(2^-j))}, j = 0..J_max.

    Vector-valued samples use the Euclidean norm of the increment.

    Raises:
        ValidationError: If 2^J_max does not divide n - 1 or p < 1.
    """
    _check_p(p)
    samples = as_samples(f_samples)
    n = len(samples)
    check_dyadic_levels(n, J_max)
    values = [shift_norm(samples, (n - 1) // 2 ** j, p) for j in range(J_max + 1)]
    return DyadicProfile(A=np.array(values), p=float(p), variant="path")


def seminorm_from_profile(profile: DyadicProfile, nu: float) -> float:
    """sup_j 2^(j nu) A_j over the stored levels.

    Raises:
        ValidationError: If the profile is empty.
    """
    if len(profile) == 0:
        raise ValidationError("profile is empty")
    return float(np.max(2.0 ** (profile.levels * nu) * profile.A))


class BesovNorm(NamedTuple):
    """Truncated (nu, p, q) norm and the last level included in the sum."""

    value: float
    truncation_level: int


def besov_pq_norm(profile: DyadicProfile, nu: float, q: float) -> BesovNorm:
    """(sum_j 2^(j q nu) A_j^q)^(1/q), summed over the stored levels.

    Raises:
        ValidationError: If q < 1 or the profile is empty.
    """
    if not np.isfinite(q) or q < 1:
        raise ValidationError(f"q must be in [1, inf), got {q}")
    if len(profile) == 0:
        raise ValidationError("profile is empty")
    terms = (2.0 ** (profile.levels * nu) * profile.A) ** q
    return BesovNorm(float(np.sum(terms) ** (1.0 / q)), profile.J_max)
