"""Core utilities for besovlab."""

from .errors import (
    BesovLabError,
    NumericalError,
    ResourceError,
    TheoremPreconditionError,
    UnsupportedError,
    ValidationError,
)
from .config import Config
from .file_io import FileIO
from .rng import normalize_seed, substream, substreams
from .validator import ConfigValidator

__all__ = [
    "BesovLabError",
    "Config",
    "ConfigValidator",
    "FileIO",
    "NumericalError",
    "ResourceError",
    "TheoremPreconditionError",
    "UnsupportedError",
    "ValidationError",
    "normalize_seed",
    "substream",
    "substreams",
]
