"""
Matrix representations of composition operators and the Guyker basis.
"""
import enum
from dataclasses import dataclass, field
from typing import List

import numpy as np

from app.core.exceptions import DomainError

from .disk import EllipticSymbol, TaylorSeries


class BasisTag(str, enum.Enum):
    """Coordinate system of an operator matrix."""

    MONOMIAL = "monomial"
    GUYKER = "guyker"


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Dense N x N compression of C_phi (or its adjoint)."""

    entries: np.ndarray = field(repr=False)
    basis: BasisTag
    symbol: EllipticSymbol

    def __post_init__(self) -> None:
        entries = np.array(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DomainError(f"Operator matrix must be square, got {entries.shape}")
        if not np.all(np.isfinite(entries)):
            raise DomainError("Operator matrix has non-finite entries")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "basis", BasisTag(self.basis))

    @property
    def n(self) -> int:
        return int(self.entries.shape[0])

    def apply(self, u: TaylorSeries) -> TaylorSeries:
        if u.N != self.n:
            raise DomainError(f"Series of length {u.N} does not match matrix size {self.n}")
        return TaylorSeries(self.entries @ u.coeffs)

    def __repr__(self) -> str:
        return f"<OperatorMatrix(n={self.n}, basis='{self.basis.value}', symbol={self.symbol!r})>"


@dataclass(frozen=True, eq=False)
class GuykerBasis:
    """Truncated coefficient vectors of e_j = k_a * phi_a^j, j < J."""

    a: complex
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        matrix = np.array(self.matrix, dtype=complex)
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @property
    def J(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def N(self) -> int:
        return int(self.matrix.shape[1])

    @property
    def vectors(self) -> List[TaylorSeries]:
        return [TaylorSeries(row) for row in self.matrix]

    def gram(self) -> np.ndarray:
        """Gram matrix G[i, j] = <e_i, e_j>."""
        return self.matrix @ self.matrix.conj().T

    def gram_deviation(self) -> float:
        """max |G - I|, the truncation budget of this basis."""
        return float(np.max(np.abs(self.gram() - np.eye(self.J))))

    def __repr__(self) -> str:
        return f"<GuykerBasis(a={self.a:.6g}, J={self.J}, N={self.N})>"
