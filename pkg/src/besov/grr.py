"""
Numerical check of the Garsia-Rodemich-Rumsey inequality.

With Psi(u) = |u|^p and rho(u) = |u|^(nu + beta/p),

    B = int int Psi(|g(v) - g(w)| / rho(|v - w|)) dv dw
      = int int |g(v) - g(w)|^p / |v - w|^(nu p + beta) dv dw

and for every pair y, z in [0, 1]

    |g(z) - g(y)| <= 8 int_0^{|z-y|} Psi^{-1}(4B / u^2) d rho(u)
                   = 8 (4B)^(1/p) (nu + beta/p) / (nu + (beta-2)/p) |z-y|^(nu + (beta-2)/p).
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy import integrate

from ..core.errors import ValidationError
from ..core.rng import substream
from .profile import as_samples


logger = logging.getLogger(__name__)


QUADRATURE_SLACK = 1.05


@dataclass(frozen=True)
class GrrCase:
    """Outcome of one GRR check.

    Attributes:
        p_exp: Exponent of Psi.
        nu: Exponent part of rho.
        beta: Second exponent part of rho.
        B: Double integral.
        violations: Grid pairs where the left side exceeds 1.05 x the right side.
        max_ratio: Largest left / right over all pairs with a positive right side.
        n_pairs: Number of pairs checked.
    """

    p_exp: float
    nu: float
    beta: float
    B: float
    violations: int
    max_ratio: float
    n_pairs: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p_exp": self.p_exp,
            "nu": self.nu,
            "beta": self.beta,
            "B": self.B,
            "violations": self.violations,
            "max_ratio": self.max_ratio,
            "n_pairs": self.n_pairs,
        }


def grr_exponent(p_exp: float, nu: float, beta: float) -> float:
    """Exponent nu + (beta - 2)/p of |z - y| on the right-hand side."""
    return nu + (beta - 2.0) / p_exp


def grr_double_integral(g_samples, p_exp: float, nu: float, beta: float,
                        times: Optional[np.ndarray] = None) -> float:
    """B by the trapezoid rule on the sample grid; the diagonal contributes zero."""
    samples = as_samples(g_samples)
    n = len(samples)
    times = np.linspace(0.0, 1.0, n) if times is None else np.asarray(times, dtype=float)
    diffs = np.linalg.norm(samples[:, None, :] - samples[None, :, :], axis=2)
    gaps = np.abs(times[:, None] - times[None, :])
    integrand = np.zeros_like(gaps)
    off = gaps > 0
    integrand[off] = diffs[off] ** p_exp / gaps[off] ** (nu * p_exp + beta)
    inner = integrate.trapezoid(integrand, times, axis=1)
    return float(integrate.trapezoid(inner, times))


def grr_check(g_samples, p_exp: float, nu: float, beta: float,
              times: Optional[np.ndarray] = None,
              slack: float = QUADRATURE_SLACK) -> GrrCase:
    """Count grid pairs violating the GRR bound.

    Args:
        g_samples: Samples of a continuous function on [0, 1].
        p_exp: Psi exponent p >= 1.
        nu: rho exponent part.
        beta: rho exponent part.
        times: Sample locations (default: uniform grid of [0, 1]).
        slack: Factor applied to the right side for quadrature error.

    Returns:
        GrrCase with B, the violation count and the largest ratio.

    Raises:
        ValidationError: If nu + (beta - 2)/p <= 0 (infinite right side) or p < 1.
    """
    if p_exp < 1:
        raise ValidationError(f"p_exp must be >= 1, got {p_exp}")
    exponent = grr_exponent(p_exp, nu, beta)
    if exponent <= 0:
        raise ValidationError(
            f"nu + (beta - 2)/p must be positive for a finite bound, got {exponent:g}"
        )
    samples = as_samples(g_samples)
    n = len(samples)
    times = np.linspace(0.0, 1.0, n) if times is None else np.asarray(times, dtype=float)
    B = grr_double_integral(samples, p_exp, nu, beta, times)

    constant = 8.0 * (4.0 * B) ** (1.0 / p_exp) * (nu + beta / p_exp) / exponent
    upper = np.triu_indices(n, k=1)
    lhs = np.linalg.norm(samples[upper[0]] - samples[upper[1]], axis=1)
    rhs = constant * np.abs(times[upper[1]] - times[upper[0]]) ** exponent
    violations = int(np.sum(lhs > slack * rhs))
    positive = rhs > 0
    max_ratio = float(np.max(lhs[positive] / rhs[positive])) if np.any(positive) else 0.0
    if violations:
        logger.warning(f"GRR check found {violations} violation(s) (p={p_exp}, nu={nu}, beta={beta})")
    return GrrCase(
        p_exp=float(p_exp),
        nu=float(nu),
        beta=float(beta),
        B=B,
        violations=violations,
        max_ratio=max_ratio,
        n_pairs=len(lhs),
    )


def random_piecewise_linear(rng: np.random.Generator, n_points: int = 129,
                            n_knots: int = 8) -> np.ndarray:
    """Continuous piecewise-linear function on [0, 1] with random knots and values."""
    knots = np.concatenate([[0.0], np.sort(rng.uniform(0.0, 1.0, n_knots - 2)), [1.0]])
    values = rng.normal(0.0, 1.0, n_knots)
    return np.interp(np.linspace(0.0, 1.0, n_points), knots, values)


def admissible_parameters(rng: np.random.Generator) -> Tuple[float, float, float]:
    """Draw (p, nu, beta) with 0 < nu + (beta - 2)/p < 1 - 1/p.

    The upper bound keeps B finite for Lipschitz functions.
    """
    p_exp = rng.uniform(2.0, 4.0)
    beta = rng.uniform(0.5, 2.5)
    exponent = rng.uniform(0.05, 0.9 * (1.0 - 1.0 / p_exp))
    nu = exponent - (beta - 2.0) / p_exp
    return float(p_exp), float(nu), float(beta)


def grr_sweep(n_cases: int, seed: int, n_points: int = 129,
              slack: float = QUADRATURE_SLACK) -> List[GrrCase]:
    """GRR checks of random piecewise-linear functions with admissible parameters.

    Case i draws from sub-stream (seed, i).
    """
    if n_cases < 1:
        raise ValidationError(f"n_cases must be positive, got {n_cases}")
    cases = []
    for i in range(n_cases):
        rng = substream(seed, i)
        p_exp, nu, beta = admissible_parameters(rng)
        g = random_piecewise_linear(rng, n_points)
        cases.append(grr_check(g, p_exp, nu, beta, slack=slack))
    total = sum(case.violations for case in cases)
    logger.info(f"GRR sweep: {n_cases} case(s), {total} violation(s)")
    return cases
