"""
Process descriptors for the simulated example processes.

A ProcessDescriptor names which process to simulate (Brownian motion,
fractional or bifractional Brownian motion, or the probe of a system of
stochastic heat equations) together with its parameters and state
dimension d. The SHE coefficient functions sigma and b are resolved by
name through small registries so configurations stay serializable.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np

from ..core.errors import TheoremPreconditionError, UnsupportedError, ValidationError
from .covariance import cov_bifbm, validate_hk


logger = logging.getLogger(__name__)


# sigma(u, rho) maps states of shape (..., d) to matrices of shape (..., d, d)
SigmaFn = Callable[[np.ndarray, float], np.ndarray]
# b(u) maps states of shape (..., d) to drifts of shape (..., d)
DriftFn = Callable[[np.ndarray], np.ndarray]


def _sigma_identity(u: np.ndarray, rho: float) -> np.ndarray:
    d = u.shape[-1]
    return np.broadcast_to(np.eye(d), u.shape + (d,))


def _sigma_scaled_identity(u: np.ndarray, rho: float) -> np.ndarray:
    d = u.shape[-1]
    return np.broadcast_to(rho * np.eye(d), u.shape + (d,))


def _sigma_tanh(u: np.ndarray, rho: float) -> np.ndarray:
    # diag(rho + 0.5 * (1 + tanh(u_k))): bounded, smooth, singular values >= rho
    d = u.shape[-1]
    diagonal = rho + 0.5 * (1.0 + np.tanh(u))
    return diagonal[..., :, None] * np.eye(d)


def _drift_zero(u: np.ndarray) -> np.ndarray:
    return np.zeros_like(u)


def _drift_bounded_smooth(u: np.ndarray) -> np.ndarray:
    return -np.tanh(u)


SIGMA_REGISTRY: Dict[str, SigmaFn] = {
    "identity": _sigma_identity,
    "scaled-identity": _sigma_scaled_identity,
    "tanh": _sigma_tanh,
}

# sigmas whose action on noise is rho * xi (or xi); the solver skips the matrix product
DIAGONAL_CONSTANT_SIGMAS = {"identity", "scaled-identity"}

DRIFT_REGISTRY: Dict[str, DriftFn] = {
    "zero": _drift_zero,
    "bounded-smooth": _drift_bounded_smooth,
}


def register_sigma(name: str, fn: SigmaFn) -> None:
    """Register a user-supplied diffusion coefficient under ``name``.

    Only boundedness and uniform ellipticity are checked (numerically, by
    check_sigma) when a SheSpec refers to it; smoothness is not verified.
    """
    SIGMA_REGISTRY[name] = fn


def register_drift(name: str, fn: DriftFn) -> None:
    """Register a user-supplied drift under ``name``."""
    DRIFT_REGISTRY[name] = fn


def check_sigma(name: str, d: int, rho: float = 1.0,
                bound: float = 1e6, n_per_axis: int = 11) -> float:
    """Check boundedness and uniform ellipticity of a registered sigma.

    Evaluates sigma on a grid of states in [-5, 5]^d and computes the
    smallest singular value over the grid.

    Args:
        name: Registered sigma name.
        d: State dimension.
        rho: Scale parameter passed to sigma.
        bound: Largest admissible absolute entry.
        n_per_axis: Grid points per state axis.

    Returns:
        The empirical ellipticity constant (minimum singular value).

    Raises:
        ValidationError: If sigma is unknown, unbounded or not elliptic.
    """
    if name not in SIGMA_REGISTRY:
        raise ValidationError(
            f"Unknown sigma: {name}. Available: {', '.join(sorted(SIGMA_REGISTRY))}"
        )
    axis = np.linspace(-5.0, 5.0, n_per_axis)
    states = np.array(list(product(axis, repeat=d)), dtype=float)
    matrices = np.asarray(SIGMA_REGISTRY[name](states, rho), dtype=float)
    if matrices.shape != (len(states), d, d):
        raise ValidationError(
            f"sigma '{name}' must return matrices of shape (n, {d}, {d}), got {matrices.shape}"
        )
    if not np.all(np.isfinite(matrices)) or np.max(np.abs(matrices)) > bound:
        raise ValidationError(f"sigma '{name}' is not bounded on the sample grid")
    ellipticity = float(np.min(np.linalg.svd(matrices, compute_uv=False)))
    if ellipticity <= 0.0:
        raise ValidationError(f"sigma '{name}' is not uniformly elliptic (rho = {ellipticity:g})")
    logger.debug(f"sigma '{name}' ellipticity on sample grid: {ellipticity:g}")
    return ellipticity


@dataclass(frozen=True)
class SheSpec:
    """Coefficients and discretization of the stochastic heat system.

    Attributes:
        sigma: Registered diffusion coefficient name.
        b: Registered drift name.
        nx: Number of spatial cells on [0, 1].
        x_probe: Probe location in (0, 1).
        rho: Scale of the scaled-identity / tanh coefficients.
        allow_degenerate: Skip the ellipticity check (testing override).
    """

    sigma: str = "identity"
    b: str = "zero"
    nx: int = 128
    x_probe: float = 0.5
    rho: float = 1.0
    allow_degenerate: bool = False

    def __post_init__(self):
        if self.nx < 16:
            raise ValidationError(f"nx must be >= 16, got {self.nx}")
        if not (0.0 < self.x_probe < 1.0):
            raise ValidationError(f"x_probe must lie strictly inside (0, 1), got {self.x_probe}")
        if self.sigma not in SIGMA_REGISTRY:
            raise ValidationError(
                f"Unknown sigma: {self.sigma}. Available: {', '.join(sorted(SIGMA_REGISTRY))}"
            )
        if self.b not in DRIFT_REGISTRY:
            raise ValidationError(
                f"Unknown drift: {self.b}. Available: {', '.join(sorted(DRIFT_REGISTRY))}"
            )
        if self.rho < 0:
            raise ValidationError(f"rho must be non-negative, got {self.rho}")

    @property
    def dx(self) -> float:
        return 1.0 / self.nx

    @property
    def probe_cell(self) -> int:
        return min(int(self.x_probe * self.nx), self.nx - 1)

    @property
    def probe_center(self) -> float:
        """Cell-centre location actually reported by the solver."""
        return (self.probe_cell + 0.5) * self.dx

    def sigma_fn(self) -> SigmaFn:
        return SIGMA_REGISTRY[self.sigma]

    def drift_fn(self) -> DriftFn:
        return DRIFT_REGISTRY[self.b]

    def validate_for(self, d: int) -> None:
        """Check hypothesis A2 numerically unless the degenerate override is set."""
        if not self.allow_degenerate:
            check_sigma(self.sigma, d, self.rho)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sigma": self.sigma,
            "b": self.b,
            "nx": int(self.nx),
            "x_probe": float(self.x_probe),
            "rho": float(self.rho),
            "allow_degenerate": bool(self.allow_degenerate),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SheSpec":
        return cls(
            sigma=data.get("sigma", "identity"),
            b=data.get("b", "zero"),
            nx=int(data.get("nx", 128)),
            x_probe=float(data.get("x_probe", 0.5)),
            rho=float(data.get("rho", 1.0)),
            allow_degenerate=bool(data.get("allow_degenerate", False)),
        )


class ProcessKind(str, Enum):
    """Simulated process family."""

    BM = "Bm"
    FBM = "Fbm"
    BIFBM = "BifBm"
    SHE = "She"


GAUSSIAN_KINDS = {ProcessKind.BM, ProcessKind.FBM, ProcessKind.BIFBM}


@dataclass(frozen=True)
class ProcessDescriptor:
    """Which process to simulate and its parameters.

    Attributes:
        kind: Process family.
        d: State dimension, 1 <= d <= 3.
        H: Hurst parameter (Fbm, BifBm).
        K: Bifractional parameter (BifBm).
        she: Heat-system specification (She).
    """

    kind: ProcessKind
    d: int = 1
    H: Optional[float] = None
    K: Optional[float] = None
    she: Optional[SheSpec] = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "kind", ProcessKind(self.kind))
        if not (1 <= self.d <= 3):
            raise ValidationError(f"d must be between 1 and 3, got {self.d}")
        if self.kind is ProcessKind.FBM:
            if self.H is None:
                raise ValidationError("Fbm requires H")
            validate_hk(self.H, 1.0)
        elif self.kind is ProcessKind.BIFBM:
            if self.H is None or self.K is None:
                raise ValidationError("BifBm requires H and K")
            validate_hk(self.H, self.K)
        elif self.kind is ProcessKind.SHE:
            if self.she is None:
                object.__setattr__(self, "she", SheSpec())

    @classmethod
    def bm(cls, d: int = 1) -> "ProcessDescriptor":
        return cls(ProcessKind.BM, d=d)

    @classmethod
    def fbm(cls, H: float, d: int = 1) -> "ProcessDescriptor":
        return cls(ProcessKind.FBM, d=d, H=H)

    @classmethod
    def bifbm(cls, H: float, K: float, d: int = 1) -> "ProcessDescriptor":
        return cls(ProcessKind.BIFBM, d=d, H=H, K=K)

    @classmethod
    def she_probe(cls, spec: SheSpec, d: int = 1) -> "ProcessDescriptor":
        return cls(ProcessKind.SHE, d=d, she=spec)

    @property
    def is_gaussian(self) -> bool:
        return self.kind in GAUSSIAN_KINDS

    @property
    def hk(self) -> Tuple[float, float]:
        """(H, K) of the equivalent bifractional covariance."""
        if self.kind is ProcessKind.BM:
            return 0.5, 1.0
        if self.kind is ProcessKind.FBM:
            return float(self.H), 1.0
        if self.kind is ProcessKind.BIFBM:
            return float(self.H), float(self.K)
        raise UnsupportedError("She has no closed-form covariance")

    @property
    def alpha(self) -> float:
        """Regularity index: 1/2, H, H*K or 1/4."""
        if self.kind is ProcessKind.SHE:
            return 0.25
        H, K = self.hk
        return H * K

    def covariance(self, s, t):
        """Coordinate covariance E[Y_s Y_t] of a Gaussian descriptor."""
        H, K = self.hk
        return cov_bifbm(H, K, s, t)

    def require_local_time_regime(self) -> None:
        """Raise unless alpha * d < 1, the regime where local times are jointly continuous."""
        if self.alpha * self.d >= 1.0:
            raise TheoremPreconditionError(
                f"local-time experiments need alpha * d < 1, got "
                f"alpha={self.alpha:g}, d={self.d} (alpha * d = {self.alpha * self.d:g})"
            )

    def label(self) -> str:
        if self.kind is ProcessKind.BM:
            return f"Bm(d={self.d})"
        if self.kind is ProcessKind.FBM:
            return f"Fbm(H={self.H:g}, d={self.d})"
        if self.kind is ProcessKind.BIFBM:
            return f"BifBm(H={self.H:g}, K={self.K:g}, d={self.d})"
        return f"She(sigma={self.she.sigma}, b={self.she.b}, d={self.d})"

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"kind": self.kind.value, "d": int(self.d)}
        if self.H is not None:
            data["H"] = float(self.H)
        if self.K is not None:
            data["K"] = float(self.K)
        if self.she is not None:
            data["she"] = self.she.to_dict()
        data["alpha"] = self.alpha
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ProcessDescriptor":
        try:
            kind = ProcessKind(data["kind"])
        except KeyError:
            raise ValidationError("Missing required field: kind")
        except ValueError:
            valid = ", ".join(k.value for k in ProcessKind)
            raise ValidationError(f"Invalid field 'kind': {data['kind']!r}. Must be one of: {valid}")
        she = data.get("she")
        return cls(
            kind=kind,
            d=int(data.get("d", 1)),
            H=data.get("H"),
            K=data.get("K"),
            she=SheSpec.from_dict(she) if isinstance(she, dict) else None,
        )
