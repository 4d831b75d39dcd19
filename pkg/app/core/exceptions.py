"""
Exception hierarchy for numerical-range computations.
"""
from typing import Optional


class NumericalRangeError(Exception):
    """Base class for every error raised by the library."""


class DomainError(NumericalRangeError, ValueError):
    """An input falls outside the domain of an operation."""


class ConvergenceError(NumericalRangeError, RuntimeError):
    """An iterative solver stopped before reaching its tolerance."""

    def __init__(
        self,
        message: str,
        best_residual: float,
        angle: Optional[float] = None,
    ):
        super().__init__(message)
        self.best_residual = best_residual
        self.angle = angle

    def __str__(self) -> str:
        text = f"{self.args[0]} (best residual {self.best_residual:.3e}"
        if self.angle is not None:
            text += f", alpha={self.angle:.17g}"
        return text + ")"


class TruncationError(NumericalRangeError):
    """No admissible truncation order was found below the configured cap."""


class ResidualCheckError(NumericalRangeError):
    """A computed quantity failed its independent re-validation."""

    def __init__(self, message: str, residual: float, tolerance: float):
        super().__init__(message)
        self.residual = residual
        self.tolerance = tolerance

    def __str__(self) -> str:
        return f"{self.args[0]} (residual {self.residual:.3e} > {self.tolerance:.1e})"


class CsvFormatError(NumericalRangeError, ValueError):
    """A boundary CSV file does not follow the expected layout."""
