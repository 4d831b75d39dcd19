"""
Closed-form boundary models for order-2 and order-3 symbols.
"""
from dataclasses import dataclass, field
from typing import Dict, Tuple


@dataclass(frozen=True)
class EllipseModel:
    """Ellipse with foci +-1 bounding the order-2 numerical range."""

    a: complex
    A: float
    B: float
    foci: Tuple[float, float] = (-1.0, 1.0)


@dataclass(frozen=True)
class Order3Geometry:
    """Constants of the order-3 boundary; both depend only on |a|."""

    a: complex
    delta: float
    L: float


@dataclass(frozen=True)
class SexticCurve:
    """
    Coefficients of the degree-6 boundary curve in the rotation-invariant basis
    r2 = x^2 + y^2, c3 = x^3 - 3 x y^2.
    """

    L: float
    P: float
    Q: float
    c_mixed: float
    c_quartic: float
    c_cubic: float
    c_quadratic: float
    c_const: float

    def as_dict(self) -> Dict[str, float]:
        return {
            "P": self.P,
            "Q": self.Q,
            "c_mixed": self.c_mixed,
            "c_quartic": self.c_quartic,
            "c_cubic": self.c_cubic,
            "c_quadratic": self.c_quadratic,
            "c_const": self.c_const,
        }

    @property
    def max_abs_coefficient(self) -> float:
        return max(abs(v) for v in self.as_dict().values())


@dataclass(frozen=True)
class DualCubic:
    """Tangential cubic u^3 - 3uv^2 - 4L(u^2 + v^2)w + 4w^3."""

    L: float

    @property
    def max_abs_coefficient(self) -> float:
        return max(4.0 * self.L, 4.0, 3.0)


@dataclass(frozen=True)
class CorrelationTriple:
    """Normalized eigenspace correlations, delta_k = |<f_j, f_l>| / (|f_j| |f_l|)."""

    delta: Tuple[float, float, float]
    theta: Tuple[float, float, float]
    provenance: str = field(default="direct")
