"""Core application functionality."""

from .exceptions import (
    ConvergenceError,
    CsvFormatError,
    DomainError,
    NumericalRangeError,
    ResidualCheckError,
    TruncationError,
)
from .logging import configure_logging

__all__ = [
    "ConvergenceError",
    "CsvFormatError",
    "DomainError",
    "NumericalRangeError",
    "ResidualCheckError",
    "TruncationError",
    "configure_logging",
]
