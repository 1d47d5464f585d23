"""
Dyadic statistics of local-time fields in the time variable.

The field's time grid is read as the unit interval with n = 2^J + 1
cut points (the extra cut point past the last sample is not used). For a
window of M grid steps, D(a, M) = sup over bins of L(., a + M) - L(., a)
is counted from the sample bin index, a block of visited bins at a time.
The uniform statistic at level j, M = (n - 1) / 2^j, is

    S_j = 2^(j q nu - j) * int_0^1 sum_{k=1}^{2^j - 1} D(2^-j (s + k - 1), M)^q ds
        = 2^(j q nu) * delta * sum_{a=0}^{n-2-M} D(a, M)^q,

the s-integral taken by the rectangle rule on the offsets of one dyadic
cell. The sup over x runs over histogram bins, a lower bound for the true
supremum.
"""

import logging
from typing import Dict, Iterable, List, Optional

import numpy as np

from ..core.errors import ValidationError
from ..loctime.field import LocalTimeField
from .profile import DyadicProfile, check_dyadic_levels, dyadic_profile


logger = logging.getLogger(__name__)


CELL_CHUNK = 64
MAX_SUP_SHIFTS = 32


def grid_columns(field: LocalTimeField) -> int:
    """Number of time cut points that are sample times."""
    return field.n_times - 1


def window_sups(field: LocalTimeField, windows: Iterable[int]) -> Dict[int, np.ndarray]:
    """D(a, m) for a = 0..n-1-m and every window m in 1..n-1.

    Cumulative counts are built for CELL_CHUNK visited bins at a time, so
    memory stays at CELL_CHUNK * n integers.
    """
    n = grid_columns(field)
    ms = sorted({int(m) for m in windows if 1 <= m <= n - 1})
    sups = {m: np.zeros(n - m, dtype=np.int64) for m in ms}
    if ms:
        _, labels = field.occupied
        labels = labels[:n]
        n_visited = int(labels.max()) + 1
        block = np.zeros((CELL_CHUNK, n), dtype=np.int64)
        for start in range(0, n_visited, CELL_CHUNK):
            ids = np.arange(start, min(start + CELL_CHUNK, n_visited))
            rows = block[: len(ids)]
            # column k counts the samples i < k
            rows[:, 0] = 0
            rows[:, 1:] = np.cumsum(labels[None, : n - 1] == ids[:, None], axis=1)
            for m in ms:
                np.maximum(sups[m], np.max(rows[:, m:] - rows[:, :-m], axis=0), out=sups[m])
    unit = field.density_unit
    return {m: s * unit for m, s in sups.items()}


def window_sup(field: LocalTimeField, m: int) -> np.ndarray:
    """D(a, m) for a = 0..n-1-m: largest increment over bins of L across m grid steps."""
    return window_sups(field, [m]).get(m, np.zeros(0))


def _check_field_levels(field: LocalTimeField, J_max: int) -> int:
    n = grid_columns(field)
    try:
        check_dyadic_levels(n, J_max)
    except ValidationError:
        raise ValidationError(
            f"J_max={J_max} is beyond the resolution of a field with {n} time points"
        )
    return n


def _check_q_nu(q: float, nu: float) -> None:
    if not np.isfinite(q) or q < 1:
        raise ValidationError(f"q must be in [1, inf), got {q}")
    if not np.isfinite(nu) or nu < 0:
        raise ValidationError(f"nu must be non-negative, got {nu}")


def _levels(n: int, J_max: int) -> Dict[int, int]:
    return {j: (n - 1) // 2 ** j for j in range(J_max + 1)}


def uniform_localtime_statistic(field: LocalTimeField, q: float, nu: float,
                                J_max: int) -> DyadicProfile:
    """Uniform-in-x dyadic statistic S_j of a local-time field, j = 0..J_max.

    Returns a profile of variant ``localtime_uniform`` with S_j, the direct
    form 2^(j q nu) ||r -> sup_x |L(x, r + 2^-j) - L(x, r)| ||^q_{L^q(I(2^-j))}
    integrated by the trapezoid rule over every window offset, and
    A_j = S_j^(1/q) * 2^(-j nu) so that classify_regularity reads the slope
    of log2 S_j^(1/q). The two forms differ by at most half a boundary term,
    2^(j q nu) * delta * max_a D(a, M)^q / 2.

    Raises:
        ValidationError: If J_max exceeds the field resolution or q < 1.
    """
    _check_q_nu(q, nu)
    n = _check_field_levels(field, J_max)
    delta = 1.0 / (n - 1)
    levels = _levels(n, J_max)
    sups_by_window = window_sups(field, levels.values())
    S = np.zeros(J_max + 1)
    direct = np.zeros(J_max + 1)
    for j, M in levels.items():
        powered = sups_by_window[M] ** q
        # dyadic-cell form: offsets i in one cell, cells k = 1..2^j - 1
        cells = 2 ** j - 1
        if cells > 0:
            per_cell = powered[: cells * M].reshape(cells, M)
            S[j] = 2.0 ** (j * q * nu - j) * float(np.sum(per_cell.mean(axis=1)))
        trapezoid = float(np.sum(powered)) - 0.5 * float(powered[0] + powered[-1])
        direct[j] = 2.0 ** (j * q * nu) * delta * trapezoid

    A = S ** (1.0 / q) * 2.0 ** (-np.arange(J_max + 1) * nu)
    logger.debug(f"uniform local-time statistic q={q}, nu={nu}: S={np.round(S, 6).tolist()}")
    return DyadicProfile(
        A=A,
        p=float(q),
        variant="localtime_uniform",
        S=S,
        q=float(q),
        nu=float(nu),
        direct=direct,
        metadata={"sup_over_x": "histogram bins", "bin_width": field.bin_width},
    )


def sup_shifts(M: int, max_shifts: int = MAX_SUP_SHIFTS) -> List[int]:
    """Grid shifts in (0, M] scanned by the shift-sup statistic (always includes M)."""
    if M <= max_shifts:
        return list(range(1, M + 1))
    return sorted(set(int(round(M * k / max_shifts)) for k in range(1, max_shifts + 1)))


def shift_sup_statistic(field: LocalTimeField, q: float, nu: float, J_max: int,
                        max_shifts: int = MAX_SUP_SHIFTS) -> np.ndarray:
    """sup over shifts h <= 2^-j of 2^(j q nu) ||r -> sup_x |L(x, r + h) - L(x, r)| ||^q_{L^q(I(h))}.

    Shifts are scanned on at most ``max_shifts`` grid-aligned values per
    level, always including 2^-j itself, so the result is never below S_j.
    """
    _check_q_nu(q, nu)
    n = _check_field_levels(field, J_max)
    delta = 1.0 / (n - 1)
    values = np.zeros(J_max + 1)
    for j, M in _levels(n, J_max).items():
        best = 0.0
        for m, sups in window_sups(field, sup_shifts(M, max_shifts)).items():
            best = max(best, delta * float(np.sum(sups[: n - 1 - m] ** q)))
        values[j] = 2.0 ** (j * q * nu) * best
    return values


def sandwich_ratios(field: LocalTimeField, q: float, nu: float, J_max: int) -> np.ndarray:
    """Shift-sup statistic over S_j for levels 1..J_max (0/0 counts as 1)."""
    dyadic = uniform_localtime_statistic(field, q, nu, J_max).S
    shifted = shift_sup_statistic(field, q, nu, J_max)
    ratios = np.ones(J_max)
    for j in range(1, J_max + 1):
        if dyadic[j] > 0:
            ratios[j - 1] = shifted[j] / dyadic[j]
        elif shifted[j] > 0:
            ratios[j - 1] = np.inf
    return ratios


def pointwise_localtime_profile(field: LocalTimeField, x, p: float,
                                J_max: int) -> DyadicProfile:
    """Dyadic profile of t -> L(x, t) for the bin containing x.

    A point outside the lattice has L(x, .) = 0 and an all-zero profile.
    """
    n = _check_field_levels(field, J_max)
    cell = field.cell_index(x)
    if cell is None:
        series = np.zeros(n)
    else:
        series = field.cell_series(cell)[:n]
    base = dyadic_profile(series, p, J_max)
    return DyadicProfile(
        A=base.A,
        p=base.p,
        variant="localtime_pointwise",
        metadata={"x": np.atleast_1d(np.asarray(x, dtype=float)).tolist()},
    )


def adler_statistic(field: LocalTimeField, mu: float, p: float, J_max: int,
                    d: Optional[int] = None) -> DyadicProfile:
    """A_j = || s -> sup_x |L(x, s + 2^-j) - L(x, s)|^(1/d) ||_{L^(p/(p-1))(I(2^-j))}.

    Boundedness of 2^(j mu/d) A_j is the local-time hypothesis under which
    the path cannot lie in the little Besov space of order (1 - mu)/d.

    Raises:
        ValidationError: If p <= d / (1 - mu) or mu is outside (0, 1).
    """
    d = field.d if d is None else d
    if not (0.0 < mu < 1.0):
        raise ValidationError(f"mu must be in (0, 1), got {mu}")
    if not p > d / (1.0 - mu):
        raise ValidationError(f"p must exceed d / (1 - mu) = {d / (1.0 - mu):g}, got {p}")
    n = _check_field_levels(field, J_max)
    conjugate = p / (p - 1.0)
    delta = 1.0 / (n - 1)
    levels = _levels(n, J_max)
    sups_by_window = window_sups(field, levels.values())
    A = np.zeros(J_max + 1)
    for j, M in levels.items():
        sups = sups_by_window[M][: n - 1 - M]
        if len(sups):
            A[j] = (delta * float(np.sum(sups ** (conjugate / d)))) ** (1.0 / conjugate)
    return DyadicProfile(
        A=A,
        p=conjugate,
        variant="localtime_adler",
        metadata={"mu": mu, "p": p, "d": d},
    )
