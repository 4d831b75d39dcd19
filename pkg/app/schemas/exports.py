"""
Pydantic schemas for the JSON files written by the command line.
"""
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from app.models.disk import EllipticSymbol
from app.models.operator import OperatorMatrix

Pair = Tuple[float, float]


def _pair(z: complex) -> Pair:
    return (float(np.real(z)), float(np.imag(z)))


class SymbolRef(BaseModel):
    """Provenance of an operator: fixed point, order and multiplier index."""

    a_re: float = Field(..., description="Real part of the fixed point")
    a_im: float = Field(..., description="Imaginary part of the fixed point")
    p: int = Field(..., ge=2, description="Order")
    k: int = Field(..., ge=1, description="Multiplier index")

    @classmethod
    def from_symbol(cls, sym: EllipticSymbol) -> "SymbolRef":
        return cls(a_re=sym.a.real, a_im=sym.a.imag, p=sym.p, k=sym.k)


class SymbolExport(BaseModel):
    """Möbius data of an elliptic symbol with its verification residuals."""

    symbol: SymbolRef
    matrix: List[List[Pair]] = Field(..., description="Normalized Möbius matrix, [re, im] entries")
    display: List[List[Pair]] = Field(..., description="Matrix scaled so the lower-right entry is 1")
    multiplier: Pair = Field(..., description="phi'(a)")
    order_residual: float = Field(..., ge=0, description="Distance of the p-fold composition from the identity")
    multiplier_residual: float = Field(..., ge=0, description="|phi'(a) - exp(2 pi i k/p)|")
    fixed_point_residual: float = Field(..., ge=0, description="|phi(a) - a|")


class MatrixExport(BaseModel):
    """Dense operator matrix, row-major [re, im] pairs."""

    n: int = Field(..., ge=1)
    basis: str
    symbol: SymbolRef
    entries: List[Pair]

    @classmethod
    def from_operator(cls, T: OperatorMatrix) -> "MatrixExport":
        flat = T.entries.reshape(-1)
        return cls(
            n=T.n,
            basis=T.basis.value,
            symbol=SymbolRef.from_symbol(T.symbol),
            entries=[_pair(z) for z in flat],
        )


class CurveExport(BaseModel):
    """Coefficients of the order-3 boundary sextic and the checks run on it."""

    L: float = Field(..., gt=0.75)
    delta: Optional[float] = Field(None, description="Delta = |a|/(1+|a|^2) when known")
    modulus: Optional[float] = Field(None, description="|a| reproducing L")
    coefficients: Dict[str, float]
    checks: Dict[str, Any] = Field(default_factory=dict)


class ComparisonReport(BaseModel):
    """Numeric sweep against the closed form for one symbol."""

    symbol: SymbolRef
    N: int
    angles: int
    ladder: List[int] = Field(..., description="Truncation orders swept")
    hausdorff: Optional[float] = Field(None, description="Numeric hull vs closed-form boundary")
    sup_support_gap: Optional[float] = Field(None, description="max over alpha of closed form minus numeric support")
    upper_bound_ok: Optional[bool] = Field(None, description="Numeric support never exceeds the closed form")
    monotonicity_ok: bool = Field(..., description="Support values grow along the ladder")
    symmetry_defect: float = Field(..., ge=0)
    symmetry_tolerance: float = Field(..., gt=0)
    stages: Dict[str, str] = Field(default_factory=dict, description="Stage name -> completed|skipped|failed")


__all__ = [
    "ComparisonReport",
    "CurveExport",
    "MatrixExport",
    "SymbolExport",
    "SymbolRef",
]
