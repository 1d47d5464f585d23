"""
Sampling strategies for drawing replicate paths of a process descriptor.

This module wraps the exact samplers behind a common interface so that
the harness and the CLI can pick a sampler by name.
"""

import logging
from abc import ABC, abstractmethod
from typing import List

from ..core.errors import UnsupportedError, ValidationError
from .descriptors import ProcessDescriptor, ProcessKind
from .gaussian import sample_fbm_circulant, sample_gaussian_paths
from .grid import GridSpec
from .sample_path import SamplePath
from .she import solve_she_ensemble


logger = logging.getLogger(__name__)


class PathSampler(ABC):
    """Abstract base class for path samplers."""

    name = ""

    @abstractmethod
    def sample(self, descriptor: ProcessDescriptor, grid: GridSpec, seed: int,
               replicates: List[int]) -> List[SamplePath]:
        """
        Draw the given replicates.

        Args:
            descriptor: Process to simulate
            grid: Time grid
            seed: Experiment seed
            replicates: Replicate indices to draw

        Returns:
            One SamplePath per replicate index, in the order given
        """
        pass


class CholeskySampler(PathSampler):
    """Covariance factorization; exact for every Gaussian descriptor."""

    name = "cholesky"

    def sample(self, descriptor, grid, seed, replicates):
        return [
            sample_gaussian_paths(descriptor, grid, seed, 1, start=r)[0]
            for r in replicates
        ]


class CirculantSampler(PathSampler):
    """
    Circulant embedding of stationary increments.

    Only Brownian and fractional Brownian motion have stationary increments;
    bifractional descriptors with K < 1 are rejected.
    """

    name = "circulant"

    def sample(self, descriptor, grid, seed, replicates):
        if descriptor.kind not in (ProcessKind.BM, ProcessKind.FBM):
            raise UnsupportedError(
                f"circulant sampler needs stationary increments, got {descriptor.label()}"
            )
        H, _ = descriptor.hk
        paths = []
        for r in replicates:
            path = sample_fbm_circulant(H, grid, seed, d=descriptor.d, replicate=r)
            if descriptor.kind is ProcessKind.BM:
                path = SamplePath(
                    times=path.times,
                    values=path.values,
                    seed=seed,
                    descriptor=descriptor,
                    replicate=r,
                    metadata=path.metadata,
                )
            paths.append(path)
        return paths


class SheSampler(PathSampler):
    """Finite-difference solution of the heat system, read at the probe."""

    name = "she"

    def sample(self, descriptor, grid, seed, replicates):
        if descriptor.kind is not ProcessKind.SHE:
            raise UnsupportedError(f"she sampler needs a She descriptor, got {descriptor.label()}")
        paths = []
        # consecutive replicate indices are solved as one batch
        runs: List[List[int]] = []
        for r in replicates:
            if runs and r == runs[-1][-1] + 1:
                runs[-1].append(r)
            else:
                runs.append([r])
        for run in runs:
            paths.extend(solve_she_ensemble(
                descriptor.she, grid, seed, len(run), d=descriptor.d, start=run[0]
            ))
        by_index = {path.replicate: path for path in paths}
        return [by_index[r] for r in replicates]


def get_sampler(sampler_name: str, descriptor: ProcessDescriptor) -> PathSampler:
    """
    Factory function to get a sampler by name.

    "auto" picks the circulant sampler for Bm and Fbm, covariance
    factorization for BifBm and the heat solver for She.

    Args:
        sampler_name: "auto", "cholesky", "circulant" or "she"
        descriptor: Process the sampler will be used for

    Returns:
        An instance of the requested sampler

    Raises:
        ValidationError: If sampler_name is not recognized
    """
    samplers = {
        "cholesky": CholeskySampler,
        "circulant": CirculantSampler,
        "she": SheSampler,
    }

    name = sampler_name.lower()
    if name == "auto":
        if descriptor.kind is ProcessKind.SHE:
            name = "she"
        elif descriptor.kind is ProcessKind.BIFBM:
            name = "cholesky"
        else:
            name = "circulant"

    if name not in samplers:
        raise ValidationError(
            f"Unknown sampler: {sampler_name}. "
            f"Available samplers: auto, {', '.join(samplers.keys())}"
        )

    return samplers[name]()


def sample_path(descriptor: ProcessDescriptor, grid: GridSpec, seed: int,
                replicate: int = 0, sampler: str = "auto") -> SamplePath:
    """Draw a single replicate with the named sampler."""
    return get_sampler(sampler, descriptor).sample(descriptor, grid, seed, [replicate])[0]


def sample_paths(descriptor: ProcessDescriptor, grid: GridSpec, seed: int,
                 n_reps: int, sampler: str = "auto") -> List[SamplePath]:
    """Draw replicates 0..n_reps-1 with the named sampler."""
    if n_reps < 1:
        raise ValidationError(f"n_reps must be positive, got {n_reps}")
    strategy = get_sampler(sampler, descriptor)
    logger.debug(f"Sampling {n_reps} replicate(s) of {descriptor.label()} with {strategy.name}")
    return strategy.sample(descriptor, grid, seed, list(range(n_reps)))
