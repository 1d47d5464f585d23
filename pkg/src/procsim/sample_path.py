"""Sample path container and its CSV/JSON export."""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np

from ..core.errors import ValidationError
from ..core.file_io import FileIO
from .descriptors import ProcessDescriptor


@dataclass(frozen=True)
class SamplePath:
    """A discretized d-dimensional trajectory on a uniform grid.

    Attributes:
        times: Strictly increasing grid times, shape (n,).
        values: State values, shape (n, d); values[0] is the origin.
        seed: Experiment seed the path was drawn from.
        descriptor: Process that generated the path.
        replicate: Replicate index within the seed.
        metadata: Sampler provenance (sampler name, fallback flags, sub-steps).
    """

    times: np.ndarray
    values: np.ndarray
    seed: int
    descriptor: ProcessDescriptor
    replicate: int = 0
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        if times.ndim != 1 or len(times) != len(values):
            raise ValidationError("times and values must have the same length")
        if len(times) < 2 or np.any(np.diff(times) <= 0):
            raise ValidationError("times must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise ValidationError("path values must be finite")
        if np.any(values[0] != 0.0):
            raise ValidationError("path must start at the origin (values[0] = 0)")
        times.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    @property
    def d(self) -> int:
        return self.values.shape[1]

    @property
    def n_points(self) -> int:
        return len(self.times)

    @property
    def spacing(self) -> float:
        return float(self.times[1] - self.times[0])

    @property
    def t_max(self) -> float:
        return float(self.times[-1])

    def coordinate(self, index: int) -> np.ndarray:
        return self.values[:, index]

    def metadata_record(self) -> Dict[str, Any]:
        """JSON sidecar content."""
        return {
            "descriptor": self.descriptor.to_dict(),
            "seed": int(self.seed),
            "replicate": int(self.replicate),
            "n_points": self.n_points,
            "t_max": self.t_max,
            **self.metadata,
        }

    def to_csv(self, file_path: str) -> str:
        """Write ``t,x1,...,xd`` rows plus a JSON sidecar next to the CSV.

        Returns:
            Path of the JSON sidecar.
        """
        header = ["t"] + [f"x{k + 1}" for k in range(self.d)]
        rows = [
            [float(t)] + [float(v) for v in row]
            for t, row in zip(self.times, self.values)
        ]
        FileIO.write_csv(file_path, header, rows)
        sidecar = str(Path(file_path).with_suffix(".json"))
        FileIO.write_json(sidecar, self.metadata_record())
        return sidecar

    @classmethod
    def from_csv(cls, file_path: str,
                 descriptor: Optional[ProcessDescriptor] = None) -> "SamplePath":
        """Read a path written by to_csv (the sidecar supplies the provenance)."""
        header, rows = FileIO.read_csv(file_path)
        if not header or header[0] != "t":
            raise ValidationError(f"Path CSV must start with a 't' column: {file_path}")
        data = np.array([[float(cell) for cell in row] for row in rows], dtype=float)
        sidecar = Path(file_path).with_suffix(".json")
        metadata: Dict[str, Any] = {}
        seed, replicate = 0, 0
        if sidecar.exists():
            metadata = FileIO.read_json(str(sidecar))
            seed = int(metadata.pop("seed", 0))
            replicate = int(metadata.pop("replicate", 0))
            if descriptor is None and "descriptor" in metadata:
                descriptor = ProcessDescriptor.from_dict(metadata["descriptor"])
            for key in ("descriptor", "n_points", "t_max"):
                metadata.pop(key, None)
        if descriptor is None:
            descriptor = ProcessDescriptor.bm(d=data.shape[1] - 1)
        return cls(
            times=data[:, 0],
            values=data[:, 1:],
            seed=seed,
            descriptor=descriptor,
            replicate=replicate,
            metadata=metadata,
        )
