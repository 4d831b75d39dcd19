"""
Möbius-map algebra, elliptic-symbol construction and truncated power series.

Möbius maps are 2x2 complex matrices; composition is the matrix product.
Series arithmetic works on plain coefficient vectors truncated at N terms.
"""
import cmath
import math
from typing import Union

import numpy as np
import structlog
from scipy.signal import lfilter

from app.core.exceptions import DomainError
from app.models.disk import EllipticSymbol, MoebiusMap, TaylorSeries
from config import settings

logger = structlog.get_logger(__name__)

SeriesLike = Union[TaylorSeries, np.ndarray]


def _coeffs(u: SeriesLike) -> np.ndarray:
    return u.coeffs if isinstance(u, TaylorSeries) else np.asarray(u, dtype=complex)


# ---------------------------------------------------------------------------
# Möbius maps
# ---------------------------------------------------------------------------


def identity_map() -> MoebiusMap:
    return MoebiusMap(np.eye(2, dtype=complex))


def rotation(omega: complex) -> MoebiusMap:
    """z -> omega z."""
    return MoebiusMap(np.array([[omega, 0.0], [0.0, 1.0]], dtype=complex))


def phi_involution(a: complex) -> MoebiusMap:
    """phi_a(z) = (a - z)/(1 - conj(a) z), the involution exchanging 0 and a."""
    a = complex(a)
    if abs(a) >= 1.0:
        raise DomainError(f"Involution parameter must lie in the open disk, got |a|={abs(a)}")
    return MoebiusMap(np.array([[-1.0, a], [-a.conjugate(), 1.0]], dtype=complex))


def compose_moebius(f: MoebiusMap, g: MoebiusMap) -> MoebiusMap:
    """
    Composition f o g as a normalized Möbius map.

    Raises:
        DomainError: If the product matrix is degenerate
    """
    return MoebiusMap(f.m @ g.m)


def moebius_power(f: MoebiusMap, n: int) -> MoebiusMap:
    """n-fold self-composition, n >= 0."""
    if n < 0:
        raise DomainError("Möbius powers are defined for n >= 0")
    result = np.eye(2, dtype=complex)
    for _ in range(n):
        result = result @ f.m
        result = result / np.linalg.norm(result)
    return MoebiusMap(result)


def identity_residual(f: MoebiusMap) -> float:
    """
    Relative distance of a Möbius matrix from the scalar matrices.

    Zero exactly when f is the identity map.
    """
    m = f.m
    off = abs(m[0, 1]) ** 2 + abs(m[1, 0]) ** 2 + 0.5 * abs(m[0, 0] - m[1, 1]) ** 2
    return float(math.sqrt(off) / np.linalg.norm(m))


def elliptic_symbol(a: complex, p: int, k: int = 1) -> EllipticSymbol:
    """
    Build the elliptic automorphism of order p fixing a with phi'(a) = exp(2 pi i k/p).

    The map is phi_a o (z -> omega z) o phi_a; for a = 0 it is the rotation itself.

    Args:
        a: Fixed point in the open unit disk
        p: Order, p >= 2
        k: Multiplier index with 1 <= k < p and gcd(k, p) = 1

    Returns:
        The elliptic symbol

    Raises:
        DomainError: If |a| >= 1, p < 2, or k does not give order exactly p
    """
    a = complex(a)
    if not math.isfinite(a.real) or not math.isfinite(a.imag) or abs(a) >= 1.0:
        raise DomainError(f"Fixed point must lie in the open unit disk, got |a|={abs(a)}")
    if p < 2:
        raise DomainError(f"Order must be at least 2, got p={p}")
    if not 1 <= k < p or math.gcd(k, p) != 1:
        raise DomainError(f"Multiplier index k={k} does not give an automorphism of order {p}")
    if abs(a) > settings.max_fixed_point_modulus:
        logger.warning(
            "Fixed point close to the circle; coefficient decay is slow",
            modulus=abs(a),
            cap=settings.max_fixed_point_modulus,
        )

    omega = cmath.exp(2j * cmath.pi * k / p)
    if a == 0:
        return EllipticSymbol(a=a, p=p, k=k, map=rotation(omega))

    phi_a = phi_involution(a)
    conjugated = compose_moebius(phi_a, compose_moebius(rotation(omega), phi_a))
    return EllipticSymbol(a=a, p=p, k=k, map=conjugated)


def involution_parameter(a: complex) -> complex:
    """b = 2a/(1 + |a|^2); the order-2 symbol fixing a equals phi_b."""
    a = complex(a)
    return 2.0 * a / (1.0 + abs(a) ** 2)


def order_residual(sym: EllipticSymbol) -> float:
    """Relative residual of the p-fold self-composition against the identity."""
    return identity_residual(moebius_power(sym.map, sym.p))


def multiplier_residual(sym: EllipticSymbol) -> float:
    """|phi'(a) - exp(2 pi i k/p)| with phi' from the quotient rule."""
    return float(abs(sym.map.derivative(sym.a) - sym.multiplier))


def fixed_point_residual(sym: EllipticSymbol) -> float:
    return float(abs(sym.map(sym.a) - sym.a))


# ---------------------------------------------------------------------------
# Truncated power series
# ---------------------------------------------------------------------------


def _check_self_map(f: MoebiusMap) -> None:
    # The pole -d/c must lie outside the closed unit disk.
    if f.c != 0 and abs(f.d) <= abs(f.c):
        raise DomainError(
            f"Möbius map has its pole inside the closed unit disk (|pole|={abs(f.d / f.c):.6g})"
        )


def moebius_to_series(f: MoebiusMap, N: int) -> TaylorSeries:
    """
    Taylor coefficients of (a z + b)/(c z + d) about 0, degrees 0..N-1.

    With r = -c/d the coefficients are b/d for n = 0 and
    (b/d) r^n + (a/d) r^(n-1) for n >= 1.

    Raises:
        DomainError: If N < 1 or the pole lies in the closed unit disk
    """
    if N < 1:
        raise DomainError(f"Truncation order must be positive, got N={N}")
    _check_self_map(f)
    a, b, c, d = f.a, f.b, f.c, f.d
    coeffs = np.zeros(N, dtype=complex)
    coeffs[0] = b / d
    if N > 1:
        r = -c / d
        n = np.arange(1, N)
        coeffs[1:] = (b / d) * r ** n + (a / d) * r ** (n - 1)
    return TaylorSeries(coeffs)


def series_multiply(u: SeriesLike, v: SeriesLike) -> TaylorSeries:
    """Cauchy product truncated to the common length."""
    cu, cv = _coeffs(u), _coeffs(v)
    if cu.size != cv.size:
        raise DomainError(f"Truncation mismatch: {cu.size} vs {cv.size}")
    return TaylorSeries(np.convolve(cu, cv)[: cu.size])


def series_power(u: SeriesLike, k: int) -> TaylorSeries:
    """u^k by repeated multiplication; k = 0 gives the constant 1."""
    if k < 0:
        raise DomainError("Series powers are defined for k >= 0")
    cu = _coeffs(u)
    result = np.zeros(cu.size, dtype=complex)
    result[0] = 1.0
    for _ in range(k):
        result = np.convolve(result, cu)[: cu.size]
    return TaylorSeries(result)


def series_times_moebius(u: SeriesLike, f: MoebiusMap) -> np.ndarray:
    """
    Coefficients of u * f truncated to len(u), for a self-map f of the disk.

    g = u (a z + b)/(c z + d) satisfies d g_n + c g_(n-1) = b u_n + a u_(n-1),
    a causal two-term recurrence, so the truncated product is exact.
    """
    _check_self_map(f)
    return lfilter([f.b, f.a], [f.d, f.c], _coeffs(u))


def kernel_series(w: complex, N: int) -> TaylorSeries:
    """
    Normalized reproducing kernel k_w(z) = sqrt(1 - |w|^2)/(1 - conj(w) z).

    Raises:
        DomainError: If |w| >= 1 or N < 1
    """
    w = complex(w)
    if abs(w) >= 1.0:
        raise DomainError(f"Kernel point must lie in the open unit disk, got |w|={abs(w)}")
    if N < 1:
        raise DomainError(f"Truncation order must be positive, got N={N}")
    n = np.arange(N)
    return TaylorSeries(math.sqrt(1.0 - abs(w) ** 2) * w.conjugate() ** n)
