"""Domain value types for composition-operator numerical ranges."""

from .curves import CorrelationTriple, DualCubic, EllipseModel, Order3Geometry, SexticCurve
from .disk import EllipticSymbol, MoebiusMap, TaylorSeries
from .numrange import BoundaryPolyline, SupportSample
from .operator import BasisTag, GuykerBasis, OperatorMatrix

__all__ = [
    "BasisTag",
    "BoundaryPolyline",
    "CorrelationTriple",
    "DualCubic",
    "EllipseModel",
    "EllipticSymbol",
    "GuykerBasis",
    "MoebiusMap",
    "OperatorMatrix",
    "Order3Geometry",
    "SexticCurve",
    "SupportSample",
    "TaylorSeries",
]
