"""
Value types for Möbius maps, elliptic symbols and truncated Taylor series.
"""
import cmath
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from app.core.exceptions import DomainError

ArrayLike = Union[complex, np.ndarray]

# Below this |det| (after Frobenius normalization) a matrix is treated as degenerate.
DEGENERACY_THRESHOLD = 1e-14


@dataclass(frozen=True, eq=False)
class MoebiusMap:
    """
    The map z -> (a z + b)/(c z + d) stored as its 2x2 complex matrix.

    The matrix is Frobenius-normalized on construction; scaling a Möbius
    matrix does not change the map.
    """

    m: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.m, dtype=complex)
        if m.shape != (2, 2):
            raise DomainError(f"Möbius matrix must be 2x2, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise DomainError("Möbius matrix has non-finite entries")
        scale = np.linalg.norm(m)
        if scale == 0.0:
            raise DomainError("Möbius matrix is zero")
        m = m / scale
        if abs(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]) < DEGENERACY_THRESHOLD:
            raise DomainError("Möbius matrix is degenerate (det ~ 0)")
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    @property
    def a(self) -> complex:
        return complex(self.m[0, 0])

    @property
    def b(self) -> complex:
        return complex(self.m[0, 1])

    @property
    def c(self) -> complex:
        return complex(self.m[1, 0])

    @property
    def d(self) -> complex:
        return complex(self.m[1, 1])

    @property
    def determinant(self) -> complex:
        return self.a * self.d - self.b * self.c

    @property
    def pole(self) -> Optional[complex]:
        """The pole -d/c, or None when the map is affine."""
        if self.c == 0:
            return None
        return -self.d / self.c

    def __call__(self, z: ArrayLike) -> ArrayLike:
        return (self.a * z + self.b) / (self.c * z + self.d)

    def derivative(self, z: ArrayLike) -> ArrayLike:
        """Quotient rule: det / (c z + d)^2."""
        return self.determinant / (self.c * z + self.d) ** 2

    def normalized_display(self) -> np.ndarray:
        """Matrix rescaled so that the lower-right entry is 1 (when non-zero)."""
        if self.d == 0:
            return np.array(self.m)
        return np.array(self.m) / self.d

    def __repr__(self) -> str:
        return (
            f"<MoebiusMap(({self.a:.6g})z + ({self.b:.6g}) / "
            f"({self.c:.6g})z + ({self.d:.6g}))>"
        )


@dataclass(frozen=True, eq=False)
class EllipticSymbol:
    """A finite-order elliptic disk automorphism with fixed point ``a``."""

    a: complex
    p: int
    k: int
    map: MoebiusMap

    @property
    def multiplier(self) -> complex:
        """phi'(a) = exp(2 pi i k / p)."""
        return cmath.exp(2j * cmath.pi * self.k / self.p)

    @property
    def mu(self) -> complex:
        """Eigenvalue generator of the adjoint, conj(phi'(a))."""
        return self.multiplier.conjugate()

    @property
    def modulus(self) -> float:
        return abs(self.a)

    def __repr__(self) -> str:
        return f"<EllipticSymbol(a={self.a:.6g}, p={self.p}, k={self.k})>"


@dataclass(frozen=True, eq=False)
class TaylorSeries:
    """Coefficients of z^0 .. z^(N-1) of a holomorphic function on the disk."""

    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        coeffs = np.array(self.coeffs, dtype=complex).reshape(-1)
        if coeffs.size < 1:
            raise DomainError("Taylor series needs at least one coefficient")
        if not np.all(np.isfinite(coeffs)):
            raise DomainError("Taylor series has non-finite coefficients")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def N(self) -> int:
        return int(self.coeffs.size)

    def __len__(self) -> int:
        return self.N

    def __repr__(self) -> str:
        return f"<TaylorSeries(N={self.N})>"
