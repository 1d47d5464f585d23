"""Exception hierarchy shared by all besovlab modules."""

from typing import Optional


class BesovLabError(Exception):
    """Base class for besovlab errors.

    Attributes:
        replicate: Index of the Monte Carlo replicate that failed, attached
            by the harness when an error escapes a replicate run.
    """

    def __init__(self, message: str, replicate: Optional[int] = None):
        super().__init__(message)
        self.message = message
        self.replicate = replicate

    def __str__(self) -> str:
        if self.replicate is None:
            return self.message
        return f"replicate {self.replicate}: {self.message}"


class ValidationError(BesovLabError, ValueError):
    """An input violates a documented precondition."""


class TheoremPreconditionError(ValidationError):
    """The experiment asks for a regime outside the regularity theorems (alpha * d >= 1)."""


class UnsupportedError(ValidationError):
    """The requested combination is not supported (e.g. Fourier local time for d >= 3)."""


class ResourceError(ValidationError):
    """The requested computation would exceed the configured size limits."""


class NumericalError(BesovLabError, ArithmeticError):
    """A numerical procedure failed (factorization, blow-up, non-finite values)."""
