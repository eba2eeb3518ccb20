"""Exception types shared across the package."""

from __future__ import annotations


class InputError(ValueError):
    """An argument violates a precondition (shape, range, parity, format)."""


class SizeError(InputError):
    """A problem size exceeds the supported cap for the requested routine."""


class DegeneracyError(RuntimeError):
    """A spectrum is degenerate where a unique state/filling is required."""


class ConvergenceError(RuntimeError):
    """An iterative solver ran out of iterations.

    Carries the best estimate so callers can inspect how close it got.
    """

    def __init__(self, message: str, energy: float | None = None,
                 residual: float | None = None):
        super().__init__(message)
        self.energy = energy
        self.residual = residual


class FitError(RuntimeError):
    """No optimizer start produced an acceptable least-squares solution."""


class ParseError(InputError):
    """A scan file is malformed; ``line`` is the 1-based offending line."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line
