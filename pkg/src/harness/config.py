"""
Experiment configuration: the JSON schema, defaults and the config hash.

A config file is the single source of truth for an experiment run. Loading
validates the raw JSON with ConfigValidator, builds the typed objects and
fills the defaults (tau, bin width heuristic, J_max from the grid).
"""

import hashlib
import json
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from ..core.errors import ValidationError
from ..core.file_io import FileIO
from ..core.rng import normalize_seed
from ..core.validator import ConfigValidator
from ..loctime.occupation import TEST_FUNCTIONS
from ..procsim.covariance import validate_bifractional_index, validate_hurst
from ..procsim.descriptors import ProcessDescriptor, ProcessKind, SheSpec
from ..procsim.grid import GridSpec


logger = logging.getLogger(__name__)


DEFAULT_TAU = 0.1
DEFAULT_P = 4.0


@dataclass(frozen=True)
class BesovQuery:
    """One (nu, p[, q]) path query."""

    nu: float
    p: float
    q: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"nu": self.nu, "p": self.p}
        if self.q is not None:
            data["q"] = self.q
        return data


@dataclass(frozen=True)
class LocalTimeSettings:
    """Local-time block of a config.

    Attributes:
        bin_width: Bin side; None selects the range * n^(-1/3) heuristic per path.
        q: Summability exponent of the uniform statistic.
        nu: Smoothness values the uniform statistic is classified at.
        J_max: Deepest level; defaults to the experiment J_max.
        residual_tests: Test functions whose occupation residual is recorded.
    """

    bin_width: Optional[float] = None
    q: float = 1.0
    nu: Tuple[float, ...] = ()
    J_max: Optional[int] = None
    residual_tests: Tuple[str, ...] = ("one", "coordinate")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "bin_width": self.bin_width,
            "q": self.q,
            "nu": list(self.nu),
            "J_max": self.J_max,
            "residual_tests": list(self.residual_tests),
        }


@dataclass(frozen=True)
class LndSettings:
    """alpha-LND block of a config."""

    m: int
    k: Tuple[Any, ...]
    alpha: float
    points_per_decade: int = 4
    n_samples: int = 10000
    mode: str = "grid"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m": self.m,
            "k": list(self.k),
            "alpha": self.alpha,
            "points_per_decade": self.points_per_decade,
            "n_samples": self.n_samples,
            "mode": self.mode,
        }


@dataclass(frozen=True)
class ExperimentConfig:
    """A validated experiment with every default filled in."""

    descriptor: ProcessDescriptor
    grid: GridSpec
    seed: int = 0
    n_replicates: int = 1
    sampler: str = "auto"
    besov: Tuple[BesovQuery, ...] = ()
    tau: float = DEFAULT_TAU
    J_max: Optional[int] = None
    localtime: Optional[LocalTimeSettings] = None
    lnd: Optional[LndSettings] = None
    out_dir: str = "results"

    def __post_init__(self):
        if self.n_replicates < 1:
            raise ValidationError(f"n_replicates must be >= 1, got {self.n_replicates}")
        if self.J_max is None:
            object.__setattr__(self, "J_max", self.grid.max_besov_level)
        elif self.J_max > self.grid.max_besov_level:
            raise ValidationError(
                f"Invalid field 'J_max': {self.J_max} exceeds the largest usable level "
                f"{self.grid.max_besov_level} of a grid with {self.grid.n_points} points"
            )
        if not self.besov:
            object.__setattr__(
                self, "besov", (BesovQuery(nu=self.descriptor.alpha, p=DEFAULT_P),)
            )
        if self.localtime is not None:
            self.descriptor.require_local_time_regime()
            if self.localtime.J_max is None or not self.localtime.nu:
                object.__setattr__(
                    self, "localtime",
                    LocalTimeSettings(
                        bin_width=self.localtime.bin_width,
                        q=self.localtime.q,
                        nu=self.localtime.nu or (self.descriptor.alpha,),
                        J_max=self.J_max if self.localtime.J_max is None else self.localtime.J_max,
                        residual_tests=self.localtime.residual_tests,
                    ),
                )
            if self.localtime.J_max > self.grid.max_besov_level:
                raise ValidationError(
                    f"Invalid field 'localtime.J_max': {self.localtime.J_max} exceeds the "
                    f"largest usable level {self.grid.max_besov_level}"
                )

    def to_dict(self) -> Dict[str, Any]:
        """Canonical JSON-ready form (the input of config_hash)."""
        data = {
            **{k: v for k, v in self.descriptor.to_dict().items() if k != "alpha"},
            **self.grid.to_dict(),
            "seed": int(self.seed),
            "n_replicates": int(self.n_replicates),
            "sampler": self.sampler,
            "besov": [q.to_dict() for q in self.besov],
            "tau": float(self.tau),
            "J_max": int(self.J_max),
            "localtime": self.localtime.to_dict() if self.localtime else None,
            "lnd": self.lnd.to_dict() if self.lnd else None,
            "out_dir": self.out_dir,
        }
        return data

    def with_overrides(self, seed: Optional[int] = None, n_replicates: Optional[int] = None,
                       out_dir: Optional[str] = None) -> "ExperimentConfig":
        """Copy with CLI overrides applied."""
        data = self.to_dict()
        if seed is not None:
            data["seed"] = seed
        if n_replicates is not None:
            data["n_replicates"] = n_replicates
        if out_dir is not None:
            data["out_dir"] = out_dir
        return config_from_dict(data)


def config_hash(config: ExperimentConfig) -> str:
    """SHA-256 of the canonical (sorted-key) JSON of a config."""
    payload = json.dumps(config.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _field_error(name: str, error: Exception) -> ValidationError:
    return ValidationError(f"Invalid field '{name}': {error}")


def config_from_dict(data: Dict[str, Any]) -> ExperimentConfig:
    """Validate a parsed JSON object and build the config.

    Raises:
        ValidationError: Naming the offending field.
        TheoremPreconditionError: If a local-time experiment has alpha * d >= 1.
    """
    is_valid, error = ConfigValidator.validate(data)
    if not is_valid:
        raise ValidationError(error)

    kind = ProcessKind(data["kind"])
    try:
        she = SheSpec.from_dict(data.get("she") or {}) if kind is ProcessKind.SHE else None
    except ValidationError as e:
        raise _field_error("she", e)
    H, K = data.get("H"), data.get("K")
    parameter_checks = []
    if kind in (ProcessKind.FBM, ProcessKind.BIFBM) and H is not None:
        parameter_checks.append(("H", validate_hurst, H))
    if kind is ProcessKind.BIFBM and K is not None:
        parameter_checks.append(("K", validate_bifractional_index, K))
    for name, check, value in parameter_checks:
        try:
            check(value)
        except ValidationError as e:
            raise _field_error(name, e)
    try:
        descriptor = ProcessDescriptor(
            kind=kind,
            d=int(data.get("d", 1)),
            H=H,
            K=K,
            she=she,
        )
    except ValidationError as e:
        raise _field_error("kind", e)
    try:
        grid = GridSpec(n_points=data["n_points"], t_max=float(data.get("t_max", 1.0)))
    except ValidationError as e:
        raise _field_error("n_points", e)

    besov = tuple(
        BesovQuery(
            nu=float(q["nu"]),
            p=float(q["p"]),
            q=float(q["q"]) if q.get("q") is not None else None,
        )
        for q in data.get("besov", [])
    )

    localtime = None
    raw_lt = data.get("localtime")
    if raw_lt is not None:
        tests = tuple(raw_lt.get("residual_tests", ["one", "coordinate"]))
        unknown = [t for t in tests if t not in TEST_FUNCTIONS]
        if unknown:
            raise ValidationError(
                f"Invalid field 'localtime.residual_tests': unknown test functions "
                f"{', '.join(unknown)}. Available: {', '.join(sorted(TEST_FUNCTIONS))}"
            )
        localtime = LocalTimeSettings(
            bin_width=raw_lt.get("bin_width"),
            q=float(raw_lt.get("q", 1.0)),
            nu=tuple(float(v) for v in raw_lt.get("nu", [])),
            J_max=raw_lt.get("J_max"),
            residual_tests=tests,
        )

    lnd = None
    raw_lnd = data.get("lnd")
    if raw_lnd is not None:
        if not descriptor.is_gaussian:
            raise ValidationError("Invalid field 'lnd': alpha-LND checks need a Gaussian kind")
        lnd = LndSettings(
            m=int(raw_lnd.get("m", 2)),
            k=tuple(raw_lnd["k"]),
            alpha=float(raw_lnd["alpha"]),
            points_per_decade=int(raw_lnd.get("points_per_decade", 4)),
            n_samples=int(raw_lnd.get("n_samples", 10000)),
            mode=raw_lnd.get("mode", "grid"),
        )

    return ExperimentConfig(
        descriptor=descriptor,
        grid=grid,
        seed=normalize_seed(data.get("seed", 0)),
        n_replicates=int(data.get("n_replicates", 1)),
        sampler=data.get("sampler", "auto"),
        besov=besov,
        tau=float(data.get("tau", DEFAULT_TAU)),
        J_max=data.get("J_max"),
        localtime=localtime,
        lnd=lnd,
        out_dir=data.get("out_dir", "results"),
    )


def load_config(path: str) -> ExperimentConfig:
    """Load and validate an experiment config file.

    Args:
        path: JSON file holding one object.

    Returns:
        ExperimentConfig with defaults filled.

    Raises:
        FileNotFoundError: If the file does not exist.
        ValidationError: If the file is not a valid config (the field is named).
        TheoremPreconditionError: If a local-time experiment has alpha * d >= 1.
    """
    try:
        data = FileIO.read_json(path)
    except json.JSONDecodeError as e:
        raise ValidationError(f"Config is not valid JSON: {e.msg}")
    config = config_from_dict(data)
    logger.debug(f"Loaded config {path}: {config.descriptor.label()}, hash {config_hash(config)[:12]}")
    return config


def describe(config: ExperimentConfig) -> List[str]:
    """Human-readable summary lines for the CLI banner."""
    lines = [
        f"Process: {config.descriptor.label()}",
        f"Grid: {config.grid.n_points} points on [0, {config.grid.t_max:g}]",
        f"Replicates: {config.n_replicates}",
        f"Seed: {config.seed}",
        f"Sampler: {config.sampler}",
        f"Besov queries: {', '.join(f'(nu={q.nu:g}, p={q.p:g})' for q in config.besov)}",
        f"J_max: {config.J_max}",
    ]
    if config.localtime is not None:
        lines.append(
            f"Local time: q={config.localtime.q:g}, nu={list(config.localtime.nu)}, "
            f"bin_width={config.localtime.bin_width or 'heuristic'}"
        )
    if config.lnd is not None:
        lines.append(f"alpha-LND: m={config.lnd.m}, alpha={config.lnd.alpha:g}")
    return lines
