"""Uniform dyadic time grids."""

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict

import numpy as np

from ..core.errors import ValidationError


MIN_LEVEL = 3


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid on [0, t_max] with 2^J + 1 points.

    Attributes:
        n_points: Number of grid points, 2^J + 1 with J >= 3.
        t_max: Time horizon.
    """

    n_points: int
    t_max: float = 1.0

    def __post_init__(self):
        if isinstance(self.n_points, bool) or not isinstance(self.n_points, (int, np.integer)):
            raise ValidationError(f"n_points must be an integer, got {self.n_points!r}")
        steps = int(self.n_points) - 1
        if steps < 1 or steps & (steps - 1):
            raise ValidationError(
                f"n_points must be 2^J + 1, got {self.n_points}"
            )
        if steps.bit_length() - 1 < MIN_LEVEL:
            raise ValidationError(
                f"n_points must be 2^J + 1 with J >= {MIN_LEVEL}, got {self.n_points}"
            )
        if not np.isfinite(self.t_max) or self.t_max <= 0:
            raise ValidationError(f"t_max must be positive, got {self.t_max}")

    @property
    def n_steps(self) -> int:
        return int(self.n_points) - 1

    @property
    def level(self) -> int:
        """J such that n_points = 2^J + 1."""
        return self.n_steps.bit_length() - 1

    @property
    def spacing(self) -> float:
        return self.t_max / self.n_steps

    @cached_property
    def times(self) -> np.ndarray:
        times = np.arange(self.n_points, dtype=float) * self.spacing
        times[-1] = self.t_max
        times.flags.writeable = False
        return times

    @property
    def max_besov_level(self) -> int:
        """Largest J_max with 2^J_max <= (n_points - 1) / 4."""
        return self.level - 2

    @classmethod
    def from_level(cls, level: int, t_max: float = 1.0) -> "GridSpec":
        return cls(n_points=2 ** level + 1, t_max=t_max)

    def to_dict(self) -> Dict[str, Any]:
        return {"n_points": int(self.n_points), "t_max": float(self.t_max)}
