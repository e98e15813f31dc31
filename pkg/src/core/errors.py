"""Exception types raised by the numerical core."""

from typing import Optional


class FracLayerError(Exception):
    """Base class for every error raised by this package."""


class DomainError(FracLayerError, ValueError):
    """An argument or parameter lies outside the admissible domain."""


class ConvergenceError(FracLayerError):
    """A quadrature or iteration ran out of budget before reaching tolerance.

    The best estimate reached so far is kept on the exception so callers can
    decide whether it is good enough.
    """

    def __init__(self, message: str, estimate: float, error_estimate: float):
        super().__init__(message)
        self.estimate = estimate
        self.error_estimate = error_estimate


class ConstructionError(FracLayerError):
    """A layer failed its construction-time validation."""

    def __init__(self, message: str, x: Optional[float] = None):
        super().__init__(message)
        self.x = x


class ConfigError(FracLayerError):
    """A run configuration could not be parsed or validated."""


class OutputError(FracLayerError):
    """A report file could not be written."""
