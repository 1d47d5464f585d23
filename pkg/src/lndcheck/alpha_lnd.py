"""
Empirical constant of the alpha-LND inequality.

For a Gaussian descriptor the quantity

    |E exp(i sum_j <v_j, dX_j>)| * prod_{j,l} |v_{j,l}|^{k_{j,l}} (t_j - t_{j-1})^{alpha k_{j,l}}

is maximized over a sample set of times and frequencies. A maximum that
stops growing as the sample set expands is the numerical witness of the
bound. Frequency magnitudes are log-uniform so both the small and the
large frequency regimes are covered. Grid mode is capped at MAX_GRID_SAMPLES
evaluations; larger searches should use random mode.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..core.errors import ResourceError, ValidationError
from ..core.rng import substream
from ..procsim.covariance import increment_covariance
from ..procsim.descriptors import ProcessDescriptor
from .charfn import CharFnQuery, _require_gaussian


logger = logging.getLogger(__name__)


CHUNK = 1 << 16
MAX_GRID_SAMPLES = 10 ** 8


@dataclass(frozen=True)
class SampleSpec:
    """How alphalnd_constant draws times and frequencies.

    Attributes:
        mode: "grid" (nested deterministic grids) or "random" (seeded blocks).
        points_per_decade: Frequency magnitudes per decade in grid mode;
            doubling it gives a superset.
        time_divisions: Grid mode times are multiples of 1 / time_divisions.
        n_samples: Number of random samples in random mode.
        window: Upper bound on t_m - t_1.
        magnitude_range: Range of |v| entries.
        include_zero: Add the zero frequency matrix to the samples.
        seed: Seed of the random blocks.
        block_size: Random samples per block; block b uses sub-stream (seed, b).
    """

    mode: str = "grid"
    points_per_decade: int = 4
    time_divisions: int = 8
    n_samples: int = 10000
    window: float = 0.5
    magnitude_range: Tuple[float, float] = (1e-2, 1e3)
    include_zero: bool = True
    seed: int = 0
    block_size: int = 1024

    def __post_init__(self):
        if self.mode not in ("grid", "random"):
            raise ValidationError(f"Unknown sample mode: {self.mode}. Available modes: grid, random")
        lo, hi = self.magnitude_range
        if not 0 < lo < hi:
            raise ValidationError(f"magnitude_range must satisfy 0 < lo < hi, got {self.magnitude_range}")
        if self.points_per_decade < 1 or self.time_divisions < 2:
            raise ValidationError("points_per_decade must be >= 1 and time_divisions >= 2")
        if not 0 < self.window <= 1:
            raise ValidationError(f"window must be in (0, 1], got {self.window}")
        if self.n_samples < 1 or self.block_size < 1:
            raise ValidationError("n_samples and block_size must be positive")
        object.__setattr__(self, "magnitude_range", (float(lo), float(hi)))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mode": self.mode,
            "points_per_decade": self.points_per_decade,
            "time_divisions": self.time_divisions,
            "n_samples": self.n_samples,
            "window": self.window,
            "magnitude_range": list(self.magnitude_range),
            "include_zero": self.include_zero,
            "seed": self.seed,
            "block_size": self.block_size,
        }


@dataclass(frozen=True)
class LndReport:
    """Result of an empirical alpha-LND constant search.

    Attributes:
        descriptor: Descriptor record.
        m: Number of times.
        k: Exponent matrix.
        alpha: LND index.
        c_empirical: Max of the normalized characteristic function.
        n_samples: Number of evaluated samples.
        argmax: Times and frequencies of the maximizer.
    """

    descriptor: Dict[str, Any]
    m: int
    k: List[List[int]]
    alpha: float
    c_empirical: float
    n_samples: int
    argmax: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "descriptor": self.descriptor,
            "m": self.m,
            "k": self.k,
            "alpha": self.alpha,
            "c_empirical": self.c_empirical,
            "n_samples": self.n_samples,
            "argmax": self.argmax,
        }


def magnitude_grid(spec: SampleSpec) -> np.ndarray:
    """Log-spaced magnitudes 10^(e / points_per_decade) inside magnitude_range."""
    lo, hi = np.log10(spec.magnitude_range)
    first = math.ceil(lo * spec.points_per_decade - 1e-9)
    last = math.floor(hi * spec.points_per_decade + 1e-9)
    return 10.0 ** (np.arange(first, last + 1) / spec.points_per_decade)


def grid_times(m: int, spec: SampleSpec) -> List[Tuple[float, ...]]:
    """Increasing m-tuples of multiples of 1/time_divisions with t_m - t_1 < window."""
    points = np.arange(1, spec.time_divisions + 1) / spec.time_divisions
    return [
        combo for combo in itertools.combinations(points.tolist(), m)
        if combo[-1] - combo[0] < spec.window - 1e-12
    ]


def _normalized_values(sigma: np.ndarray, gaps: np.ndarray, v: np.ndarray,
                       k: np.ndarray, alpha: float) -> np.ndarray:
    # v has shape (N, m, d); returns |charfn| * prod |v|^k * gaps^(alpha k)
    variance = np.einsum("njl,jk,nkl->n", v, sigma, v)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_weight = np.where(k > 0, k * np.log(np.abs(v)), 0.0).sum(axis=(1, 2))
    log_weight += alpha * float(np.sum(k * np.log(gaps)[:, None]))
    return np.exp(-0.5 * np.maximum(variance, 0.0) + log_weight)


def grid_sample_count(m: int, d: int, spec: SampleSpec) -> int:
    """Number of (times, v) pairs a grid-mode search evaluates, without the zero frequency."""
    entries = 2 * len(magnitude_grid(spec))
    return len(grid_times(m, spec)) * entries ** (m * d)


def _grid_frequencies(m: int, d: int, spec: SampleSpec) -> Iterator[np.ndarray]:
    mags = magnitude_grid(spec)
    entries = np.concatenate([-mags[::-1], mags])
    total = len(entries) ** (m * d)
    for start in range(0, total, CHUNK):
        idx = np.arange(start, min(start + CHUNK, total))
        digits = np.stack(np.unravel_index(idx, (len(entries),) * (m * d)), axis=1)
        yield entries[digits].reshape(-1, m, d)


def _random_samples(m: int, d: int, spec: SampleSpec) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    lo, hi = np.log10(spec.magnitude_range)
    n_blocks = math.ceil(spec.n_samples / spec.block_size)
    for block in range(n_blocks):
        size = min(spec.block_size, spec.n_samples - block * spec.block_size)
        rng = substream(spec.seed, block)
        # always draw a full block so that block contents do not depend on n_samples
        first = rng.uniform(0.0, 1.0, spec.block_size)
        rest = rng.uniform(0.0, 1.0, (spec.block_size, m - 1))
        magnitudes = 10.0 ** rng.uniform(lo, hi, (spec.block_size, m, d))
        signs = rng.choice(np.array([-1.0, 1.0]), size=(spec.block_size, m, d))
        span = np.minimum(spec.window, 1.0 - first)
        times = np.concatenate(
            [first[:, None], first[:, None] + np.sort(rest, axis=1) * span[:, None]], axis=1
        )
        yield times[:size], (magnitudes * signs)[:size]


def _check_inputs(descriptor: ProcessDescriptor, m: int, k_matrix, alpha: float) -> np.ndarray:
    _require_gaussian(descriptor)
    if m < 2:
        raise ValidationError(f"m must be >= 2, got {m}")
    if not (0.0 < alpha < 1.0):
        raise ValidationError(f"alpha must be in (0, 1), got {alpha}")
    k = np.asarray(k_matrix)
    if k.ndim == 1:
        k = k[:, None]
    if k.shape != (m, descriptor.d):
        raise ValidationError(f"k must have shape ({m}, {descriptor.d}), got {k.shape}")
    if np.any(k < 0):
        raise ValidationError("exponents k must be non-negative")
    return k.astype(int)


def alphalnd_constant(descriptor: ProcessDescriptor, m: int, k_matrix: Sequence,
                      alpha: float, sample_spec: Optional[SampleSpec] = None) -> LndReport:
    """Empirical alpha-LND constant over a sample set.

    Args:
        descriptor: Gaussian descriptor.
        m: Number of times.
        k_matrix: Exponents, shape (m, d) (a length-m sequence for d = 1).
        alpha: LND index in (0, 1).
        sample_spec: Sampling of times and frequencies (grid mode by default).

    Returns:
        LndReport with the maximum and its argument.

    Raises:
        ValidationError: If an exponent is negative or the shapes disagree.
        ResourceError: If a grid-mode search exceeds MAX_GRID_SAMPLES evaluations.
        UnsupportedError: If the descriptor is not Gaussian.
    """
    spec = sample_spec or SampleSpec()
    k = _check_inputs(descriptor, m, k_matrix, alpha)
    H, K = descriptor.hk
    d = descriptor.d

    best, best_arg, count = -np.inf, {}, 0

    def consider(values: np.ndarray, times: np.ndarray, v: np.ndarray) -> None:
        nonlocal best, best_arg, count
        count += len(values)
        i = int(np.argmax(values))
        if values[i] > best:
            best = float(values[i])
            best_arg = {"times": times[i].tolist(), "v": v[i].tolist()}

    if spec.mode == "grid":
        combos = grid_times(m, spec)
        if not combos:
            raise ValidationError(
                f"no increasing {m}-tuple of grid times fits the window {spec.window}"
            )
        total = grid_sample_count(m, d, spec)
        if total > MAX_GRID_SAMPLES:
            raise ResourceError(
                f"grid search needs {total} grid samples (limit {MAX_GRID_SAMPLES}); "
                f"lower points_per_decade or use random mode"
            )
        for combo in combos:
            times = np.array(combo)
            sigma = increment_covariance(H, K, times)
            gaps = np.diff(np.concatenate([[0.0], times]))
            for v in _grid_frequencies(m, d, spec):
                values = _normalized_values(sigma, gaps, v, k, alpha)
                consider(values, np.broadcast_to(times, (len(v), m)), v)
    else:
        for times_block, v_block in _random_samples(m, d, spec):
            values = np.empty(len(v_block))
            for i, (times, v) in enumerate(zip(times_block, v_block)):
                sigma = increment_covariance(H, K, times)
                gaps = np.diff(np.concatenate([[0.0], times]))
                values[i] = _normalized_values(sigma, gaps, v[None], k, alpha)[0]
            consider(values, times_block, v_block)

    if spec.include_zero:
        times = np.arange(1, m + 1) * (spec.window / (2.0 * m))
        zero_value = 1.0 if not np.any(k) else 0.0
        consider(np.array([zero_value]), times[None], np.zeros((1, m, d)))

    if count == 0:
        raise ValidationError("the sample specification produced no samples")
    logger.info(f"alpha-LND constant for {descriptor.label()}: {best:.6g} over {count} samples")
    return LndReport(
        descriptor=descriptor.to_dict(),
        m=m,
        k=k.tolist(),
        alpha=float(alpha),
        c_empirical=best,
        n_samples=count,
        argmax=best_arg,
    )


def lnd_query(report: LndReport) -> CharFnQuery:
    """Query of the maximizing sample of a report."""
    return CharFnQuery(
        times=np.array(report.argmax["times"]),
        v=np.array(report.argmax["v"]),
        k=np.array(report.k),
        alpha=report.alpha,
    )
