"""
Histogram estimator of the local time (occupation density) of a path.

For a path sampled at t_i = t_0 + i*dt and a lattice of cubic bins of side
dx, the estimate at the k-th time cut point is

    L(bin, t_k) = (1 / dx^d) * sum_{i < k} dt * 1{phi(t_i) in bin},

a left-endpoint rule, so dx^d * sum_bins L(., t_k) = k*dt exactly. The field
stores the bin of every sample; columns, increments and per-bin time series
are counted from that index on demand, so memory is linear in the number of
samples whatever the lattice size.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np

from ..core.errors import ResourceError, ValidationError
from ..core.file_io import FileIO
from ..procsim.sample_path import SamplePath


logger = logging.getLogger(__name__)


ESTIMATOR_VERSION = "histogram-left-endpoint/1"
MAX_BINS = 10 ** 7

PathLike = Union[SamplePath, Tuple[np.ndarray, np.ndarray]]


def path_arrays(path: PathLike) -> Tuple[np.ndarray, np.ndarray]:
    """Return (times, values) with values of shape (n, d) for a path or raw arrays."""
    if isinstance(path, SamplePath):
        return path.times, path.values
    times, values = path
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        values = values[:, None]
    if times.ndim != 1 or len(times) != len(values) or len(times) < 2:
        raise ValidationError("times and values must have the same length (at least 2)")
    steps = np.diff(times)
    if np.any(steps <= 0) or not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
        raise ValidationError("path times must be uniformly spaced and increasing")
    if not np.all(np.isfinite(values)):
        raise ValidationError("path values must be finite")
    return times, values


def default_bin_width(values: np.ndarray) -> float:
    """Histogram bandwidth (path range) * n^(-1/3); a constant path uses n^(-1/3)."""
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        values = values[:, None]
    n = len(values)
    spread = float(np.max(np.ptp(values, axis=0)))
    if spread <= 0.0:
        spread = 1.0
    return spread * n ** (-1.0 / 3.0)


@dataclass(frozen=True, eq=False)
class LocalTimeField:
    """Estimated occupation density on a bin lattice times a time grid.

    Attributes:
        bin_width: Side dx of the cubic bins.
        base: Integer index of the lowest bin per dimension (edges are
            multiples of dx, so fields of different paths share a lattice).
        n_bins: Number of bins per dimension.
        t0: First sample time.
        dt: Sample spacing.
        cells: Flattened bin index of every sample, shape (n,).
    """

    bin_width: float
    base: Tuple[int, ...]
    n_bins: Tuple[int, ...]
    t0: float
    dt: float
    cells: np.ndarray = field(repr=False)

    @property
    def d(self) -> int:
        return len(self.n_bins)

    @property
    def n_times(self) -> int:
        return len(self.cells) + 1

    @property
    def n_cells(self) -> int:
        return math.prod(self.n_bins)

    @property
    def cell_volume(self) -> float:
        return self.bin_width ** self.d

    @property
    def density_unit(self) -> float:
        """Density carried by one sample in one bin."""
        return self.dt / self.cell_volume

    @cached_property
    def t_grid(self) -> np.ndarray:
        """Time cut points: the sample times plus the end of the last sample interval."""
        grid = self.t0 + np.arange(self.n_times, dtype=float) * self.dt
        grid.flags.writeable = False
        return grid

    @cached_property
    def occupied(self) -> Tuple[np.ndarray, np.ndarray]:
        """(visited bins in increasing order, label of each sample among them)."""
        bins, labels = np.unique(self.cells, return_inverse=True)
        bins.flags.writeable = False
        labels = labels.reshape(-1)
        labels.flags.writeable = False
        return bins, labels

    @cached_property
    def _visits(self) -> Tuple[np.ndarray, np.ndarray]:
        # sample indices grouped by bin, increasing within each bin
        order = np.argsort(self.cells, kind="stable")
        return self.cells[order], order

    @property
    def bin_edges(self) -> Tuple[np.ndarray, ...]:
        return tuple(
            (b + np.arange(n + 1, dtype=float)) * self.bin_width
            for b, n in zip(self.base, self.n_bins)
        )

    @property
    def bin_centers(self) -> Tuple[np.ndarray, ...]:
        return tuple(
            (b + 0.5 + np.arange(n, dtype=float)) * self.bin_width
            for b, n in zip(self.base, self.n_bins)
        )

    def cell_centers(self) -> np.ndarray:
        """Centres of all bins in flattened order, shape (n_cells, d)."""
        mesh = np.meshgrid(*self.bin_centers, indexing="ij")
        return np.stack([axis.ravel() for axis in mesh], axis=1)

    def time_index(self, t: float) -> int:
        """Column index of a time cut point.

        Raises:
            ValidationError: If t is not on t_grid.
        """
        k = int(round((t - self.t0) / self.dt))
        if k < 0 or k >= self.n_times or not math.isclose(
                self.t_grid[k], t, rel_tol=1e-9, abs_tol=1e-12):
            raise ValidationError(f"t={t} is not on the local-time grid")
        return k

    def cell_index(self, x) -> Optional[int]:
        """Flattened index of the bin containing x, or None outside the lattice."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if x.shape != (self.d,):
            raise ValidationError(f"x must have {self.d} coordinate(s)")
        idx = np.floor(x / self.bin_width).astype(np.int64) - np.asarray(self.base)
        if np.any(idx < 0) or np.any(idx >= np.asarray(self.n_bins)):
            return None
        return int(np.ravel_multi_index(tuple(idx), self.n_bins))

    def counts_at(self, k: int) -> np.ndarray:
        """Integer occupation counts of all bins over the samples i < k."""
        return np.bincount(self.cells[:k], minlength=self.n_cells)

    def column(self, t: float) -> np.ndarray:
        """Densities over all bins at time cut point t, shape (n_cells,)."""
        return self.counts_at(self.time_index(t)) * self.density_unit

    def visits(self, cell: int) -> np.ndarray:
        """Increasing sample indices that fall in a bin."""
        sorted_cells, order = self._visits
        lo, hi = np.searchsorted(sorted_cells, [cell, cell + 1])
        return order[lo:hi]

    def cell_series(self, cell: int) -> np.ndarray:
        """t -> L(bin, t) over t_grid for one bin, shape (n_times,)."""
        steps = np.zeros(self.n_times, dtype=np.int64)
        steps[self.visits(cell) + 1] = 1
        return np.cumsum(steps) * self.density_unit

    def value_at(self, x, t: float) -> float:
        """Estimated L(x, t); zero outside the lattice."""
        k = self.time_index(t)
        cell = self.cell_index(x)
        if cell is None:
            return 0.0
        return float(np.searchsorted(self.visits(cell), k)) * self.density_unit

    def increment(self, t1: float, t2: float) -> np.ndarray:
        """L(., t2) - L(., t1) over all bins, computed from integer counts."""
        k1, k2 = self.time_index(t1), self.time_index(t2)
        if k2 < k1:
            raise ValidationError(f"t2={t2} must not precede t1={t1}")
        return np.bincount(self.cells[k1:k2], minlength=self.n_cells) * self.density_unit

    def mass(self, t: float) -> float:
        """dx^d * sum over bins of L(., t); equals t - t0."""
        return float(self.counts_at(self.time_index(t)).sum() * self.dt)

    def metadata_record(self) -> Dict[str, Any]:
        return {
            "estimator": ESTIMATOR_VERSION,
            "bin_width": self.bin_width,
            "d": self.d,
            "n_bins": list(self.n_bins),
            "lower_edges": [float(b * self.bin_width) for b in self.base],
            "t0": self.t0,
            "dt": self.dt,
            "n_times": self.n_times,
            "sup_over_x": "histogram bins (lower bound for the true supremum)",
        }

    def to_csv(self, file_path: str) -> str:
        """Write rows of bin centres with one column per t_grid value, plus a JSON sidecar.

        Bins the path never visits are written as zero rows.

        Returns:
            Path of the JSON sidecar.
        """
        centers = self.cell_centers()
        header = [f"x{k + 1}" for k in range(self.d)] + [
            format(float(t), ".17g") for t in self.t_grid
        ]
        zeros = [0.0] * self.n_times
        visited = set(self.occupied[0].tolist())
        rows = [
            [float(c) for c in centers[i]]
            + (self.cell_series(i).tolist() if i in visited else zeros)
            for i in range(self.n_cells)
        ]
        FileIO.write_csv(file_path, header, rows)
        sidecar = str(Path(file_path).with_suffix(".json"))
        FileIO.write_json(sidecar, self.metadata_record())
        return sidecar


def local_time_field(path: PathLike, bin_width: Optional[float] = None) -> LocalTimeField:
    """Build the histogram local-time field of a path.

    Bins are anchored at multiples of bin_width and cover the path's range
    plus one bin of margin on each side.

    Args:
        path: SamplePath or (times, values) arrays on a uniform time grid.
        bin_width: Bin side dx; defaults to (path range) * n^(-1/3).

    Returns:
        LocalTimeField with n + 1 time cut points.

    Raises:
        ValidationError: If bin_width is not positive.
        ResourceError: If the lattice would exceed 10^7 bins.
    """
    times, values = path_arrays(path)
    if bin_width is None:
        bin_width = default_bin_width(values)
    if not np.isfinite(bin_width) or bin_width <= 0:
        raise ValidationError(f"bin_width must be positive, got {bin_width}")

    n, d = values.shape
    scaled = np.floor(values / bin_width)
    if not np.all(np.isfinite(scaled)) or np.max(np.abs(scaled)) > 2 ** 52:
        raise ResourceError(f"bin_width {bin_width:g} is too small for the path range")
    indices = scaled.astype(np.int64)
    base = indices.min(axis=0) - 1
    n_bins = indices.max(axis=0) - base + 2
    total_bins = math.prod(int(nb) for nb in n_bins)
    if total_bins > MAX_BINS:
        raise ResourceError(
            f"bin_width {bin_width:g} gives {total_bins} bins (limit {MAX_BINS})"
        )

    n_bins_tuple = tuple(int(nb) for nb in n_bins)
    cells = np.ravel_multi_index(tuple((indices - base).T), n_bins_tuple).astype(np.int64)
    cells.flags.writeable = False

    dt = float(times[1] - times[0])
    logger.debug(f"local-time field: dx={bin_width:g}, bins={n_bins_tuple}, times={n + 1}")
    return LocalTimeField(
        bin_width=float(bin_width),
        base=tuple(int(b) for b in base),
        n_bins=n_bins_tuple,
        t0=float(times[0]),
        dt=dt,
        cells=cells,
    )
