"""
Exception hierarchy for stein-lab.

Every error raised by the library derives from SteinLabError and from the
builtin ValueError, so numerical call sites can catch either.

Failed inequalities are never exceptions: checks report them as verdicts.
"""

from __future__ import annotations


class SteinLabError(ValueError):
    """Root of all stein-lab errors."""


class ValidationError(SteinLabError):
    """An input violates a stated invariant (Hermiticity, positivity, normalization, ...)."""

    def __init__(self, message: str, *, field: str | None = None, residual: float | None = None):
        super().__init__(message)
        self.field = field
        self.residual = residual


class SizeGuardError(SteinLabError):
    """An enumeration or dense-dimension guard would be exceeded."""

    def __init__(self, message: str, *, requested: int, limit: int):
        super().__init__(f"{message} (requested {requested}, limit {limit})")
        self.requested = requested
        self.limit = limit


class PreconditionError(SteinLabError):
    """A lemma hypothesis or parameter range does not hold."""


class ConfigError(SteinLabError):
    """Environment or experiment configuration is invalid."""

    def __init__(self, message: str, *, path: str | None = None):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
