"""
Finite-difference solver for the system of stochastic heat equations on [0, 1].

    du_k/dt = d^2u_k/dx^2 + b_k(u) + sum_l sigma_kl(u) W'_l(t, x),
    u_k(0, x) = 0,  Neumann boundary conditions at x = 0 and x = 1.

The interval is split into nx cells; the Laplacian is the centred second
difference with ghost cells mirroring the boundary cells. Time stepping is
explicit Euler with sub-steps dt <= dx^2 / 4, and the white-noise integral
over one space-time cell is N(0, dt * dx), so each cell receives a noise
increment of variance dt / dx. The returned path is u(t, x_probe) at the
cell containing x_probe, sampled on the requested time grid.
"""

import logging
import math
from typing import List, Tuple

import numpy as np

from ..core.errors import NumericalError, ValidationError
from ..core.rng import substream
from .descriptors import DIAGONAL_CONSTANT_SIGMAS, ProcessDescriptor, SheSpec
from .grid import GridSpec
from .sample_path import SamplePath


logger = logging.getLogger(__name__)


# sub-step limit as a fraction of dx^2 (the explicit scheme is stable up to 1/2)
STABILITY_FRACTION = 0.25


def substep_plan(spec: SheSpec, grid: GridSpec) -> Tuple[int, float]:
    """Number of Euler sub-steps per grid interval and the sub-step length."""
    limit = STABILITY_FRACTION * spec.dx ** 2
    n_sub = max(1, math.ceil(grid.spacing / limit - 1e-12))
    return n_sub, grid.spacing / n_sub


def _laplacian(u: np.ndarray, dx: float) -> np.ndarray:
    # u has shape (replicates, nx, d); edge padding is the Neumann ghost cell
    padded = np.pad(u, ((0, 0), (1, 1), (0, 0)), mode="edge")
    return (padded[:, 2:] - 2.0 * u + padded[:, :-2]) / dx ** 2


def solve_she_ensemble(spec: SheSpec, grid: GridSpec, seed: int, n_reps: int,
                       d: int = 1, start: int = 0) -> List[SamplePath]:
    """Solve independent replicates of the heat system side by side.

    Replicate r draws its noise from the sub-stream (seed, r), so the
    result for a replicate does not depend on which others are batched
    with it.

    Args:
        spec: Coefficients and discretization.
        grid: Output time grid.
        seed: Experiment seed.
        n_reps: Number of replicates.
        d: Number of components.
        start: Index of the first replicate.

    Returns:
        One SamplePath of u(t, x_probe) per replicate.

    Raises:
        ValidationError: If sigma fails the ellipticity check.
        NumericalError: If the field becomes non-finite.
    """
    if n_reps < 1:
        raise ValidationError(f"n_reps must be positive, got {n_reps}")
    spec.validate_for(d)
    descriptor = ProcessDescriptor.she_probe(spec, d=d)
    n_sub, dt = substep_plan(spec, grid)
    nx, dx = spec.nx, spec.dx
    probe = spec.probe_cell
    logger.debug(
        f"SHE solve: nx={nx}, {grid.n_steps} grid steps x {n_sub} sub-steps (dt={dt:.3e}), "
        f"{n_reps} replicate(s)"
    )

    sigma = spec.sigma_fn()
    drift = spec.drift_fn()
    noise_scale = math.sqrt(dt / dx)
    if spec.sigma == "identity":
        constant_factor = 1.0
    elif spec.sigma in DIAGONAL_CONSTANT_SIGMAS:
        constant_factor = spec.rho
    else:
        constant_factor = None

    generators = [substream(seed, start + r) for r in range(n_reps)]
    u = np.zeros((n_reps, nx, d))
    noise = np.empty_like(u)
    probe_series = np.zeros((n_reps, grid.n_points, d))

    for step in range(1, grid.n_points):
        for _ in range(n_sub):
            for r, generator in enumerate(generators):
                generator.standard_normal(out=noise[r])
            noise *= noise_scale
            update = dt * (_laplacian(u, dx) + drift(u))
            if constant_factor is None:
                update += np.einsum("...kl,...l->...k", sigma(u, spec.rho), noise)
            elif constant_factor != 0.0:
                update += constant_factor * noise
            u += update
        if not np.all(np.isfinite(u)):
            raise NumericalError(f"SHE field became non-finite at grid step {step}")
        probe_series[:, step] = u[:, probe]

    metadata = {
        "sampler": "she",
        "fallback": False,
        "substeps": n_sub,
        "dt": dt,
        "probe_center": spec.probe_center,
    }
    return [
        SamplePath(
            times=grid.times,
            values=probe_series[r],
            seed=seed,
            descriptor=descriptor,
            replicate=start + r,
            metadata=dict(metadata),
        )
        for r in range(n_reps)
    ]


def solve_she(spec: SheSpec, grid: GridSpec, seed: int, d: int = 1,
              replicate: int = 0) -> SamplePath:
    """Solve one replicate of the heat system and return u(., x_probe)."""
    return solve_she_ensemble(spec, grid, seed, 1, d=d, start=replicate)[0]


def neumann_green_variance(x: float, t: float, n_terms: int = 4000) -> float:
    """Integral of G_{t-r}(x, v)^2 over [0, t] x [0, 1] for the Neumann heat kernel.

    With G_s(x, v) = 1 + 2 sum_n cos(n pi x) cos(n pi v) exp(-n^2 pi^2 s),
    orthogonality of the cosines gives

        t + sum_n 2 cos^2(n pi x) (1 - exp(-2 n^2 pi^2 t)) / (2 n^2 pi^2).

    This is the variance of u(t, x) for sigma = identity and b = 0.
    """
    if t < 0:
        raise ValidationError(f"t must be non-negative, got {t}")
    n = np.arange(1, n_terms + 1, dtype=float)
    rate = 2.0 * (n * np.pi) ** 2
    series = 2.0 * np.cos(n * np.pi * x) ** 2 * -np.expm1(-rate * t) / rate
    return float(t + np.sum(series))


def linear_she_variance(spec: SheSpec, grid: GridSpec, t: float) -> float:
    """Exact variance of the discrete scheme at the probe cell for sigma = rho*I, b = 0.

    The Neumann second-difference matrix has eigenvectors cos(n pi (i + 1/2) dx)
    with eigenvalues -(4/dx^2) sin^2(n pi dx / 2); each Euler step multiplies
    mode n by 1 - dt*lambda_n, so the variance is a geometric sum per mode.

    Raises:
        ValidationError: If t is not a grid time or the coefficients are not linear.
    """
    if spec.b != "zero" or spec.sigma not in DIAGONAL_CONSTANT_SIGMAS:
        raise ValidationError("linear_she_variance needs a constant diagonal sigma and zero drift")
    index = int(round(t / grid.spacing))
    if index < 0 or index >= grid.n_points or not math.isclose(
            grid.times[index], t, rel_tol=1e-12, abs_tol=1e-15):
        raise ValidationError(f"t={t} is not on the time grid")
    rho = 1.0 if spec.sigma == "identity" else spec.rho
    n_sub, dt = substep_plan(spec, grid)
    n_steps = index * n_sub

    modes = np.arange(spec.nx, dtype=float)
    eigen = 4.0 / spec.dx ** 2 * np.sin(modes * np.pi * spec.dx / 2.0) ** 2
    weight = 2.0 * np.cos(modes * np.pi * spec.probe_center) ** 2
    weight[0] = 1.0
    ratio = (1.0 - dt * eigen) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        geometric = np.where(
            np.isclose(ratio, 1.0, rtol=0.0, atol=1e-15),
            float(n_steps),
            -np.expm1(n_steps * np.log(ratio)) / (1.0 - ratio),
        )
    return float(rho ** 2 * dt * np.sum(weight * geometric))
