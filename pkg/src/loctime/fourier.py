"""
Truncated Fourier representation of the local time, used as an oracle.

    L_N(x, t) = (2 pi)^{-d} int_{[-N, N]^d} e^{-i<u, x>} int_0^t e^{i<u, X_s>} ds du

The inner time integral is a trapezoid rule over the path samples up to t,
the outer frequency integral a trapezoid rule with step at most
pi / (4 R), R the largest distance the phase u*(X_s - x) has to resolve.
Both rules are tensor products, so the d-dimensional frequency sum
factorizes over coordinates for each time sample.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from ..core.errors import ResourceError, UnsupportedError, ValidationError
from .field import LocalTimeField, PathLike, local_time_field, path_arrays


logger = logging.getLogger(__name__)


MAX_FREQUENCY_POINTS = 2 ** 22
CHUNK_ENTRIES = 2 ** 22


@dataclass(frozen=True)
class FourierLtQuery:
    """Truncation level N, evaluation point x and time t of an L_N evaluation."""

    N: float
    x: Tuple[float, ...]
    t: float

    def __post_init__(self):
        if not np.isfinite(self.N) or self.N < 0:
            raise ValidationError(f"truncation N must be >= 0, got {self.N}")
        x = tuple(float(v) for v in np.atleast_1d(self.x))
        object.__setattr__(self, "x", x)
        if self.t < 0:
            raise ValidationError(f"t must be >= 0, got {self.t}")


def _trapezoid_weights(n: int, step: float) -> np.ndarray:
    weights = np.full(n, step)
    weights[0] = weights[-1] = step / 2.0
    return weights


def frequency_grid(N: float, radius: float) -> Tuple[np.ndarray, np.ndarray]:
    """Symmetric trapezoid nodes and weights on [-N, N] with step <= pi / (4 radius)."""
    max_step = math.pi / (4.0 * radius) if radius > 0 else 2.0 * N
    n_intervals = max(1, math.ceil(2.0 * N / max_step))
    if n_intervals + 1 > MAX_FREQUENCY_POINTS:
        raise ResourceError(
            f"frequency grid of {n_intervals + 1} points exceeds {MAX_FREQUENCY_POINTS}"
        )
    nodes = np.linspace(-N, N, n_intervals + 1)
    return nodes, _trapezoid_weights(n_intervals + 1, 2.0 * N / n_intervals)


def _cosine_sums(offsets: np.ndarray, nodes: np.ndarray, weights: np.ndarray) -> np.ndarray:
    # sum_u w(u) cos(u * a) for each offset a; the sine part cancels on a symmetric grid
    out = np.empty(len(offsets))
    chunk = max(1, CHUNK_ENTRIES // len(nodes))
    for start in range(0, len(offsets), chunk):
        block = offsets[start:start + chunk]
        out[start:start + chunk] = np.cos(np.outer(block, nodes)) @ weights
    return out


def fourier_local_time(path: PathLike, query: FourierLtQuery) -> float:
    """Evaluate the truncated Fourier local time L_N(x, t).

    Args:
        path: SamplePath or (times, values) arrays, d <= 2.
        query: Truncation, point and time.

    Returns:
        Real part of the nested quadrature.

    Raises:
        UnsupportedError: If d >= 3.
        ValidationError: If x has the wrong dimension.
    """
    times, values = path_arrays(path)
    d = values.shape[1]
    if d >= 3:
        raise UnsupportedError(f"Fourier local time supports d <= 2, got d={d}")
    if len(query.x) != d:
        raise ValidationError(f"x must have {d} coordinate(s), got {len(query.x)}")
    if query.N == 0:
        return 0.0

    keep = int(np.searchsorted(times, query.t + 1e-12 * max(1.0, abs(query.t)), side="right"))
    if keep < 2:
        return 0.0
    dt = float(times[1] - times[0])
    time_weights = _trapezoid_weights(keep, dt)

    offsets = values[:keep] - np.asarray(query.x)
    radius = max(float(np.max(np.ptp(values, axis=0))), float(np.max(np.abs(offsets))))
    nodes, weights = frequency_grid(query.N, radius)

    product = np.ones(keep)
    for k in range(d):
        product *= _cosine_sums(offsets[:, k], nodes, weights)
    value = float(np.dot(time_weights, product)) / (2.0 * math.pi) ** d
    logger.debug(f"L_N(x={query.x}, t={query.t}) with N={query.N}: {value:.6g} "
                 f"({len(nodes)} frequency nodes)")
    return value


@dataclass(frozen=True)
class CrossCheckResult:
    """Histogram against Fourier local time at probe points (t = t_max).

    Attributes:
        discrepancy: Max over probes of |histogram - Fourier|.
        probes: Probe locations (bin centres).
        histogram: Histogram estimates at the probes.
        fourier: L_N estimates at the probes.
        atomic: True when the path range is below one bin, so the occupation
            measure has no density and a large discrepancy is expected.
    """

    discrepancy: float
    probes: Tuple[float, ...]
    histogram: Tuple[float, ...]
    fourier: Tuple[float, ...]
    atomic: bool = False
    max_histogram: float = field(default=0.0)

    def to_dict(self):
        return {
            "discrepancy": self.discrepancy,
            "probes": list(self.probes),
            "histogram": list(self.histogram),
            "fourier": list(self.fourier),
            "atomic": self.atomic,
            "max_histogram": self.max_histogram,
        }


def probe_points(lt_field: LocalTimeField, values: np.ndarray, n_probe: int) -> List[float]:
    """Bin centres at evenly spaced occupation quantiles of the path."""
    levels = np.linspace(0.0, 1.0, n_probe + 2)[1:-1]
    quantiles = np.quantile(values[:-1, 0], levels)
    centers = lt_field.bin_centers[0]
    probes = []
    for q in quantiles:
        cell = lt_field.cell_index([q])
        probes.append(float(centers[cell]))
    return probes


def localtime_cross_check(path: PathLike, bin_width: Optional[float], N: float,
                          n_probe: int = 3, probes: Optional[List[float]] = None
                          ) -> CrossCheckResult:
    """Compare the histogram and Fourier estimates of L(x, t_max) for a scalar path.

    Args:
        path: Scalar path.
        bin_width: Histogram bin width (None for the default heuristic).
        N: Fourier truncation.
        n_probe: Number of probes (>= 3) placed at occupation quantiles.
        probes: Explicit probe locations instead of quantiles.

    Returns:
        CrossCheckResult; ``atomic`` flags paths without a density.

    Raises:
        UnsupportedError: If d != 1.
        ValidationError: If fewer than 3 probes are requested.
    """
    times, values = path_arrays(path)
    if values.shape[1] != 1:
        raise UnsupportedError(f"cross check supports d = 1, got d={values.shape[1]}")
    lt_field = local_time_field((times, values), bin_width)
    if probes is None:
        if n_probe < 3:
            raise ValidationError(f"n_probe must be >= 3, got {n_probe}")
        probes = probe_points(lt_field, values, n_probe)
    elif len(probes) < 3:
        raise ValidationError(f"at least 3 probes are required, got {len(probes)}")

    t_end = float(times[-1])
    histogram = [lt_field.value_at([x], t_end) for x in probes]
    fourier = [fourier_local_time((times, values), FourierLtQuery(N, (x,), t_end)) for x in probes]
    discrepancy = max(abs(h - f) for h, f in zip(histogram, fourier))
    atomic = float(np.ptp(values)) < lt_field.bin_width
    if atomic:
        logger.warning(f"path range below one bin: occupation measure is atomic "
                       f"(discrepancy {discrepancy:.3g})")
    return CrossCheckResult(
        discrepancy=float(discrepancy),
        probes=tuple(float(x) for x in probes),
        histogram=tuple(histogram),
        fourier=tuple(fourier),
        atomic=bool(atomic),
        max_histogram=float(lt_field.column(t_end).max()),
    )
