"""
Exact samplers for the Gaussian example processes.

sample_gaussian_paths is the reference sampler: it factorizes the
covariance matrix of B^{H,K} on the grid and multiplies the factor with
standard normal vectors. sample_fbm_circulant is the fast path for
fractional Brownian motion: stationary increments are generated by
circulant embedding (Davies-Harte) and summed.

Each coordinate of each replicate draws from its own counter-based
sub-stream keyed by (seed, replicate, coordinate).
"""

import logging
from typing import List

import numpy as np

from ..core.errors import UnsupportedError, ValidationError
from ..core.rng import substream
from .covariance import cholesky_factor, validate_hk
from .descriptors import ProcessDescriptor
from .grid import GridSpec
from .sample_path import SamplePath


logger = logging.getLogger(__name__)


EIGENVALUE_TOLERANCE = 1e-8


def sample_gaussian_paths(descriptor: ProcessDescriptor, grid: GridSpec, seed: int,
                          n_reps: int, start: int = 0) -> List[SamplePath]:
    """Draw replicates by covariance factorization.

    Args:
        descriptor: Bm, Fbm or BifBm descriptor.
        grid: Time grid.
        seed: Experiment seed.
        n_reps: Number of replicates.
        start: Index of the first replicate; replicate r always uses the
            sub-streams (seed, r, coordinate).

    Returns:
        List of SamplePath, one per replicate.

    Raises:
        UnsupportedError: If the descriptor is not Gaussian.
        NumericalError: If the covariance cannot be factorized.
    """
    if not descriptor.is_gaussian:
        raise UnsupportedError(f"{descriptor.kind.value} is not a Gaussian descriptor")
    if n_reps < 1:
        raise ValidationError(f"n_reps must be positive, got {n_reps}")

    H, K = descriptor.hk
    factor = cholesky_factor(H, K, grid.n_points, float(grid.t_max))
    d = descriptor.d
    size = grid.n_points - 1

    normals = np.empty((size, n_reps * d))
    for r in range(n_reps):
        for k in range(d):
            normals[:, r * d + k] = substream(seed, start + r, k).standard_normal(size)
    draws = factor @ normals

    paths = []
    for r in range(n_reps):
        values = np.zeros((grid.n_points, d))
        values[1:] = draws[:, r * d:(r + 1) * d]
        paths.append(SamplePath(
            times=grid.times,
            values=values,
            seed=seed,
            descriptor=descriptor,
            replicate=start + r,
            metadata={"sampler": "cholesky", "fallback": False},
        ))
    return paths


def fgn_autocovariance(H: float, lags: np.ndarray) -> np.ndarray:
    """Autocovariance of unit-step fractional Gaussian noise."""
    lags = np.abs(np.asarray(lags, dtype=float))
    return 0.5 * (
        np.abs(lags + 1) ** (2 * H)
        - 2 * lags ** (2 * H)
        + np.abs(lags - 1) ** (2 * H)
    )


def circulant_eigenvalues(H: float, n_steps: int) -> np.ndarray:
    """Eigenvalues of the minimal circulant embedding of the fGn covariance."""
    gamma = fgn_autocovariance(H, np.arange(n_steps + 1))
    row = np.concatenate([gamma, gamma[-2:0:-1]])
    return np.fft.fft(row).real


def sample_fbm_circulant(H: float, grid: GridSpec, seed: int, d: int = 1,
                         replicate: int = 0) -> SamplePath:
    """Draw fractional Brownian motion by circulant embedding of its increments.

    Args:
        H: Hurst parameter in (0, 1).
        grid: Time grid.
        seed: Experiment seed.
        d: Number of independent coordinates.
        replicate: Replicate index (selects the sub-streams).

    Returns:
        SamplePath with metadata ``sampler`` and ``fallback``. When the
        embedding has an eigenvalue below -1e-8 (relative to the largest),
        the path is drawn by covariance factorization instead and
        ``fallback`` is True.
    """
    validate_hk(H, 1.0)
    descriptor = ProcessDescriptor.fbm(H, d=d)
    m = grid.n_steps
    eigenvalues = circulant_eigenvalues(H, m)
    if eigenvalues.min() < -EIGENVALUE_TOLERANCE * max(eigenvalues.max(), 1.0):
        logger.warning(
            f"Circulant embedding not positive for H={H}, n={grid.n_points}; "
            f"falling back to covariance factorization"
        )
        path = sample_gaussian_paths(descriptor, grid, seed, 1, start=replicate)[0]
        return SamplePath(
            times=path.times,
            values=path.values,
            seed=seed,
            descriptor=descriptor,
            replicate=replicate,
            metadata={"sampler": "circulant", "fallback": True},
        )

    scale = np.sqrt(np.clip(eigenvalues, 0.0, None) / (2 * m))
    step_scale = grid.spacing ** H
    values = np.zeros((grid.n_points, d))
    for k in range(d):
        rng = substream(seed, replicate, k)
        z = rng.standard_normal(2 * m) + 1j * rng.standard_normal(2 * m)
        increments = np.fft.fft(scale * z)[:m].real * step_scale
        values[1:, k] = np.cumsum(increments)
    return SamplePath(
        times=grid.times,
        values=values,
        seed=seed,
        descriptor=descriptor,
        replicate=replicate,
        metadata={"sampler": "circulant", "fallback": False},
    )
