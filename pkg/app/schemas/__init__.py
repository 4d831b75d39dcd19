"""Pydantic schemas for reports, exports and run configuration."""

from .check_report import CheckReport, TestRecord
from .exports import ComparisonReport, CurveExport, MatrixExport, SymbolExport, SymbolRef
from .run_config import RunConfig

__all__ = [
    # Reports
    "CheckReport",
    "TestRecord",

    # Exports
    "ComparisonReport",
    "CurveExport",
    "MatrixExport",
    "SymbolExport",
    "SymbolRef",

    # Configuration
    "RunConfig",
]
