"""
Closed-form machinery for order-3 symbols.

With Delta = |a|/(1+|a|^2) and the constant L(Delta) > 3/4, the support
function of the numerical range is the largest root Lambda_0 of
lambda^3 - L lambda = cos^3(alpha) - 3/4 cos(alpha). Its support lines are
the tangents of a sextic Gamma whose tangential equation is the cubic
u^3 - 3uv^2 - 4L(u^2+v^2)w + 4w^3.
"""
import cmath
import math
from typing import Any, Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
import structlog
from scipy.optimize import brentq

from app.core.exceptions import DomainError, ResidualCheckError
from app.models.curves import DualCubic, Order3Geometry, SexticCurve
from app.models.disk import EllipticSymbol
from app.models.numrange import BoundaryPolyline, SupportSample
from config import settings

logger = structlog.get_logger(__name__)

Triple = Tuple[float, float, float]

TWO_PI_3 = 2.0 * math.pi / 3.0

# Unsquared support equation must hold to this relative residual.
EQC_TOLERANCE = 1e-9

# Envelope and cubic-solver denominators below this are degenerate.
DENOMINATOR_FLOOR = 1e-12

# Real roots of Gamma(x, 0) closer than this are counted once.
ROOT_CLUSTER_TOLERANCE = 1e-4

# Descending scan for the largest root of the determinant equation.
_SCAN_POINTS = 256


# ---------------------------------------------------------------------------
# Geometry constants
# ---------------------------------------------------------------------------


def _L_of_delta(delta: float) -> float:
    d2 = delta * delta
    numerator = 3.0 + 6.0 * delta ** 3 * math.sqrt(3.0 - 3.0 * d2) - 6.0 * d2 * d2 - 6.0 * d2
    return numerator / (4.0 * (1.0 - d2) * (1.0 - 4.0 * d2))


def L_extended(modulus: float, digits: Optional[int] = None) -> float:
    """L evaluated with mpmath at the given number of digits."""
    digits = settings.extended_precision_digits if digits is None else digits
    with mpmath.workdps(digits):
        r = mpmath.mpf(modulus)
        delta = r / (1 + r * r)
        d2 = delta * delta
        numerator = 3 + 6 * delta ** 3 * mpmath.sqrt(3 - 3 * d2) - 6 * d2 * d2 - 6 * d2
        return float(numerator / (4 * (1 - d2) * (1 - 4 * d2)))


def geometry_of(a: complex) -> Order3Geometry:
    """
    Delta and L for an order-3 symbol with fixed point a.

    Raises:
        DomainError: If a = 0 or |a| >= 1
    """
    a = complex(a)
    modulus = abs(a)
    if modulus == 0.0:
        raise DomainError("Order-3 geometry needs a non-zero fixed point")
    if modulus >= 1.0:
        raise DomainError(f"Fixed point must lie in the open unit disk, got |a|={modulus}")
    delta = modulus / (1.0 + modulus ** 2)
    if modulus > settings.extended_precision_modulus:
        logger.warning("Fixed point near the circle; L evaluated in extended precision", modulus=modulus)
        L = L_extended(modulus)
    else:
        L = _L_of_delta(delta)
    return Order3Geometry(a=a, delta=delta, L=L)


def geometry_from_L(L: float) -> Order3Geometry:
    """
    Invert Delta -> L on (0, 1/2); the returned fixed point is real.

    Raises:
        DomainError: If L <= 3/4 or L is outside the reachable range
    """
    if not L > 0.75:
        raise DomainError(f"L must exceed 3/4, got L={L}")
    lo, hi = 1e-12, 0.5 - 1e-15
    if not _L_of_delta(lo) < L < _L_of_delta(hi):
        raise DomainError(f"L={L} is outside the range reachable by |a| < 1")
    delta = brentq(lambda d: _L_of_delta(d) - L, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    modulus = (1.0 - math.sqrt(1.0 - 4.0 * delta * delta)) / (2.0 * delta)
    return Order3Geometry(a=complex(modulus), delta=delta, L=float(L))


def chebyshev_zeta(alpha: float) -> Triple:
    """The three roots of 4 z^3 - 3 z = cos(3 alpha), led by cos(alpha)."""
    return (math.cos(alpha), math.cos(alpha - TWO_PI_3), math.cos(alpha + TWO_PI_3))


def effective_alpha(sym: EllipticSymbol, alpha: float) -> float:
    """
    Angle at which the correlation-level formulas are evaluated.

    They are written for mu = exp(2 pi i/3); the other primitive cube root
    mirrors the angle.
    """
    if sym.p != 3:
        raise DomainError(f"Effective angle is defined for order 3, got p={sym.p}")
    if abs(sym.mu - cmath.exp(2j * math.pi / 3)) < 1e-12:
        return alpha
    return -alpha


# ---------------------------------------------------------------------------
# Support function Lambda_0
# ---------------------------------------------------------------------------


def _largest_cubic_root(L: float, c: float) -> float:
    """Largest real root of lambda^3 - L lambda - c."""
    if L > 0.0 and 27.0 * c * c <= 4.0 * L ** 3:
        argument = (3.0 * c / (2.0 * L)) * math.sqrt(3.0 / L)
        root = 2.0 * math.sqrt(L / 3.0) * math.cos(math.acos(max(-1.0, min(1.0, argument))) / 3.0)
    else:
        # One real root (Cardano).
        disc = math.sqrt(c * c / 4.0 - L ** 3 / 27.0)
        root = math.copysign(abs(c / 2.0 + disc) ** (1.0 / 3.0), c / 2.0 + disc)
        root += math.copysign(abs(c / 2.0 - disc) ** (1.0 / 3.0), c / 2.0 - disc)

    def f(x: float) -> float:
        return x ** 3 - L * x - c

    scale = max(abs(root) ** 3, abs(L * root), abs(c), 1.0)
    if abs(f(root)) > 1e-12 * scale:
        lo = math.sqrt(L / 3.0) if L > 0.0 else 0.0
        hi = 1.0 + max(abs(L), abs(c))
        root = brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return root


def _largest_cubic_root_mp(L: float, c: float, digits: int) -> float:
    with mpmath.workdps(digits):
        L_mp, c_mp = mpmath.mpf(L), mpmath.mpf(c)
        argument = (3 * c_mp / (2 * L_mp)) * mpmath.sqrt(3 / L_mp)
        argument = max(mpmath.mpf(-1), min(mpmath.mpf(1), argument))
        return float(2 * mpmath.sqrt(L_mp / 3) * mpmath.cos(mpmath.acos(argument) / 3))


def det_closed(lam: float, zeta: Sequence[float], delta: Sequence[float]) -> float:
    """
    prod(lambda - zeta_j) - sum (lambda^3 - zeta_j^3) delta_j^2
    - 2 prod sqrt(lambda^2 + lambda zeta_j + zeta_j^2) delta_j.
    """
    product = 1.0
    quadratic = 0.0
    radical = 2.0
    for z, d in zip(zeta, delta):
        product *= lam - z
        quadratic += (lam ** 3 - z ** 3) * d * d
        radical *= math.sqrt(max(lam * lam + lam * z + z * z, 0.0)) * d
    return product - quadratic - radical


def _det_scale(lam: float, zeta: Sequence[float], delta: Sequence[float]) -> float:
    product = 1.0
    quadratic = 0.0
    radical = 2.0
    for z, d in zip(zeta, delta):
        product *= abs(lam - z)
        quadratic = max(quadratic, abs(lam ** 3 - z ** 3) * d * d)
        radical *= math.sqrt(max(lam * lam + lam * z + z * z, 0.0)) * d
    return max(product, quadratic, radical, abs(lam) ** 3, 1e-300)


def eqc_residual(lam: float, alpha: float, geo: Order3Geometry) -> float:
    """Relative residual of the unsquared support equation at (lambda, alpha)."""
    zeta = chebyshev_zeta(alpha)
    delta = (geo.delta,) * 3
    return abs(det_closed(lam, zeta, delta)) / _det_scale(lam, zeta, delta)


def lambda0(alpha: float, geo: Order3Geometry) -> float:
    """
    Closed-form support value Lambda_0(alpha).

    The cubic comes from squaring, so every root is re-validated against
    the unsquared equation with principal square roots.

    Raises:
        ResidualCheckError: If the re-validation fails
    """
    c = math.cos(alpha) ** 3 - 0.75 * math.cos(alpha)
    if abs(geo.a) > settings.extended_precision_modulus:
        lam = _largest_cubic_root_mp(geo.L, c, settings.extended_precision_digits)
    else:
        lam = _largest_cubic_root(geo.L, c)
    residual = eqc_residual(lam, alpha, geo)
    if residual > EQC_TOLERANCE:
        raise ResidualCheckError(f"Support root at alpha={alpha:.17g} fails the unsquared equation", residual, EQC_TOLERANCE)
    return lam


def lambda0_derivative(alpha: float, geo: Order3Geometry, lam: Optional[float] = None) -> float:
    """Lambda_0'(alpha) by implicit differentiation of the support cubic."""
    lam = lambda0(alpha, geo) if lam is None else lam
    denominator = 3.0 * lam * lam - geo.L
    if abs(denominator) < DENOMINATOR_FLOOR:
        raise ResidualCheckError("Support cubic has a double root", abs(denominator), DENOMINATOR_FLOOR)
    return math.sin(alpha) * (0.75 - 3.0 * math.cos(alpha) ** 2) / denominator


def lambda_prime(alpha: float, delta: Sequence[float], geo: Order3Geometry) -> float:
    """
    Largest real root of the determinant equation for correlations delta.

    The bracket runs from max(zeta) up to 1 + sum(delta) + L (doubled until
    the determinant is positive); a descending scan finds the first sign
    change, which Brent's method then refines.

    Raises:
        DomainError: If some delta_j < 0 or no sign change is found
    """
    delta = tuple(float(d) for d in delta)
    if len(delta) != 3 or min(delta) < 0.0:
        raise DomainError(f"Need three non-negative correlations, got {delta}")
    zeta = chebyshev_zeta(alpha)

    def g(lam: float) -> float:
        return det_closed(lam, zeta, delta)

    lower = max(zeta)
    upper = 1.0 + sum(delta) + geo.L
    for _ in range(60):
        if g(upper) > 0.0:
            break
        upper *= 2.0
    else:
        raise DomainError("Determinant equation has no positive upper bracket")

    grid = np.linspace(upper, lower, _SCAN_POINTS)
    previous = grid[0]
    for lam in grid[1:]:
        value = g(lam)
        if value == 0.0:
            return float(lam)
        if value < 0.0:
            return float(brentq(g, lam, previous, xtol=1e-14, rtol=4 * np.finfo(float).eps))
        previous = lam
    if abs(g(lower)) <= 1e-14 * _det_scale(lower, zeta, delta):
        return float(lower)
    raise DomainError(f"Determinant equation has no sign change on [{lower:.6g}, {upper:.6g}]")


# ---------------------------------------------------------------------------
# Determinant identity
# ---------------------------------------------------------------------------


def stationary_angles(lam: float, zeta: Sequence[float]) -> Triple:
    """Phi_k with cos = (-2 lambda - zeta_k)/(2 S_k), sin = -sqrt(3) zeta_k/(2 S_k)."""
    angles = []
    for z in zeta:
        s2 = lam * lam + lam * z + z * z
        if s2 <= 0.0:
            raise DomainError(f"Degenerate stationary angle: lambda^2 + lambda zeta + zeta^2 = {s2:.3e}")
        s = math.sqrt(s2)
        angles.append(math.atan2(-math.sqrt(3.0) * z / (2.0 * s), (-2.0 * lam - z) / (2.0 * s)))
    return tuple(angles)


def correlation_matrix(lam: float, zeta: Sequence[float], delta: Sequence[float], phi: Sequence[float]) -> np.ndarray:
    """
    The symmetric matrix M(lambda, Phi).

    Off-diagonal entry (lambda cos Phi_k + zeta_k cos(Phi_k - pi/3)) delta_k
    sits opposite the diagonal entry lambda - zeta_k.
    """
    def entry(k: int) -> float:
        return (lam * math.cos(phi[k]) + zeta[k] * math.cos(phi[k] - math.pi / 3.0)) * delta[k]

    M = np.diag([lam - z for z in zeta])
    M[1, 2] = M[2, 1] = entry(0)
    M[0, 2] = M[2, 0] = entry(1)
    M[0, 1] = M[1, 0] = entry(2)
    return M


def detM_identity(
    lam: float,
    zeta: Sequence[float],
    delta: Sequence[float],
    phi_star: Optional[Sequence[float]] = None,
) -> Tuple[float, float]:
    """
    Numeric det M(lambda, Phi*) next to its closed form.

    Raises:
        DomainError: If a stationary angle is degenerate
    """
    phi = stationary_angles(lam, zeta) if phi_star is None else tuple(phi_star)
    det_numeric = float(np.linalg.det(correlation_matrix(lam, zeta, delta, phi)))
    return det_numeric, det_closed(lam, zeta, delta)


# ---------------------------------------------------------------------------
# Envelope and curves
# ---------------------------------------------------------------------------


def envelope_point(alpha: float, geo: Order3Geometry) -> Tuple[float, float]:
    """
    Point where the support line at alpha touches the boundary.

    Raises:
        ResidualCheckError: If 3 Lambda_0^2 - L is below the degeneracy floor
    """
    lam = lambda0(alpha, geo)
    slope = lambda0_derivative(alpha, geo, lam)
    x = lam * math.cos(alpha) - slope * math.sin(alpha)
    y = lam * math.sin(alpha) + slope * math.cos(alpha)
    return x, y


def envelope_samples(geo: Order3Geometry, angles: Sequence[float]) -> List[SupportSample]:
    samples = []
    for alpha in sorted(float(a) for a in angles):
        x, y = envelope_point(alpha, geo)
        samples.append(SupportSample(alpha=alpha, lam=lambda0(alpha, geo), point=complex(x, y)))
    return samples


def envelope_polyline(geo: Order3Geometry, angles: Sequence[float]) -> BoundaryPolyline:
    return BoundaryPolyline(points=[s.point for s in envelope_samples(geo, angles)])


def dual_cubic_eval(u: complex, v: complex, w: complex, L: float) -> complex:
    """u^3 - 3 u v^2 - 4 L (u^2 + v^2) w + 4 w^3."""
    return u ** 3 - 3.0 * u * v ** 2 - 4.0 * L * (u ** 2 + v ** 2) * w + 4.0 * w ** 3


def dual_cubic_gradient(u: complex, v: complex, w: complex, L: float) -> Tuple[complex, complex, complex]:
    return (
        3.0 * u ** 2 - 3.0 * v ** 2 - 8.0 * L * u * w,
        -6.0 * u * v - 8.0 * L * v * w,
        -4.0 * L * (u ** 2 + v ** 2) + 12.0 * w ** 2,
    )


def support_line_residual(alpha: float, geo: Order3Geometry) -> float:
    """Normalized cubic value at the support line (cos alpha, sin alpha, -Lambda_0)."""
    value = dual_cubic_eval(math.cos(alpha), math.sin(alpha), -lambda0(alpha, geo), geo.L)
    return abs(value) / DualCubic(geo.L).max_abs_coefficient


def dual_cubic_singularity_check(L: float) -> Dict[str, Any]:
    """
    Gradient of the tangential cubic at its only candidate critical points.

    F_v = 0 forces v = 0 or u = -4Lw/3; with F_u = 0 this leaves
    (8L/3, 0, 1) and (-4L/3, +-4L/sqrt(3), 1), where F_w = 12 - 256 L^3/9.
    The cubic is singular only for L = 3/4.
    """
    candidates = [
        (8.0 * L / 3.0, 0.0, 1.0),
        (-4.0 * L / 3.0, 4.0 * L / math.sqrt(3.0), 1.0),
        (-4.0 * L / 3.0, -4.0 * L / math.sqrt(3.0), 1.0),
    ]
    scale = DualCubic(L).max_abs_coefficient
    gradients = []
    for point in candidates:
        grad = dual_cubic_gradient(*point, L)
        size = max(1.0, max(abs(c) for c in point)) ** 2
        gradients.append(float(np.linalg.norm(grad)) / (scale * size))
    smallest = min(gradients)
    return {
        "L": L,
        "candidates": [list(p) for p in candidates],
        "gradient_norms": gradients,
        "min_gradient_norm": smallest,
        "singular": bool(smallest <= settings.strict_equality_tolerance),
    }


def inflexional_tangent_check(L: float, samples: int = 16, seed: int = 0) -> Dict[str, Any]:
    """
    On the line 3u + 4Lw = 0 the cubic restricts to (4 - 27/(16 L^3)) u^3,
    independent of v, so the line meets the cubic only at (0, 1, 0), three times.
    """
    rng = np.random.default_rng(seed)
    u = rng.standard_normal(samples)
    v = rng.standard_normal(samples)
    w = -3.0 * u / (4.0 * L)
    expected = (4.0 - 27.0 / (16.0 * L ** 3)) * u ** 3
    scale = DualCubic(L).max_abs_coefficient * np.maximum(1.0, np.maximum(np.abs(u), np.abs(v))) ** 3
    residual = float(np.max(np.abs(dual_cubic_eval(u, v, w, L) - expected) / scale))
    return {
        "L": L,
        "leading_coefficient": 4.0 - 27.0 / (16.0 * L ** 3),
        "max_residual": residual,
        "samples": samples,
    }


def sextic_coeffs(L: float) -> SexticCurve:
    """
    Coefficients of Gamma in the basis r2 = x^2 + y^2, c3 = x^3 - 3xy^2:
    P r2^3 + Q c3^2 + c_mixed r2 c3 + c_quartic r2^2 + c_cubic c3
    + c_quadratic r2 + c_const.

    Raises:
        DomainError: If L <= 3/4
    """
    if not L > 0.75:
        raise DomainError(f"L must exceed 3/4, got L={L}")
    L3 = L ** 3
    return SexticCurve(
        L=float(L),
        P=1.0 - 27.0 / (64.0 * L3),
        Q=27.0 / (64.0 * L3),
        c_mixed=-9.0 / (4.0 * L),
        c_quartic=27.0 / (16.0 * L * L) - L,
        c_cubic=2.0 - 27.0 / (64.0 * L3),
        c_quadratic=-9.0 / (8.0 * L),
        c_const=27.0 / (256.0 * L3),
    )


def sextic_eval(x, y, curve: SexticCurve):
    """Gamma(x, y); vectorized."""
    r2 = x * x + y * y
    c3 = x ** 3 - 3.0 * x * y * y
    return (
        curve.P * r2 ** 3
        + curve.Q * c3 ** 2
        + curve.c_mixed * r2 * c3
        + curve.c_quartic * r2 ** 2
        + curve.c_cubic * c3
        + curve.c_quadratic * r2
        + curve.c_const
    )


def sextic_gradient(x, y, curve: SexticCurve):
    r2 = x * x + y * y
    c3 = x ** 3 - 3.0 * x * y * y
    r2_x, r2_y = 2.0 * x, 2.0 * y
    c3_x, c3_y = 3.0 * x * x - 3.0 * y * y, -6.0 * x * y

    def partial(dr2, dc3):
        return (
            3.0 * curve.P * r2 ** 2 * dr2
            + 2.0 * curve.Q * c3 * dc3
            + curve.c_mixed * (dr2 * c3 + r2 * dc3)
            + 2.0 * curve.c_quartic * r2 * dr2
            + curve.c_cubic * dc3
            + curve.c_quadratic * dr2
        )

    return partial(r2_x, c3_x), partial(r2_y, c3_y)


def normalized_sextic(x, y, curve: SexticCurve):
    return np.abs(sextic_eval(x, y, curve)) / curve.max_abs_coefficient


def on_curve_point(L: float) -> Tuple[float, float]:
    """Envelope point at alpha = pi/2: (-3/(8L), sqrt(L))."""
    return -3.0 / (8.0 * L), math.sqrt(L)


def cusp_points(L: float) -> List[Tuple[float, float]]:
    """(3/(4L), 0) and its rotations by +-2 pi/3."""
    r = 3.0 / (4.0 * L)
    return [(r * math.cos(k * TWO_PI_3), r * math.sin(k * TWO_PI_3)) for k in range(3)]


def x_axis_polynomial(curve: SexticCurve) -> np.ndarray:
    """Coefficients of Gamma(x, 0), highest degree first."""
    return np.array(
        [curve.P + curve.Q, curve.c_mixed, curve.c_quartic, curve.c_cubic, curve.c_quadratic, 0.0, curve.c_const]
    )


def factorization_check(curve: SexticCurve) -> float:
    """
    Relative coefficient error between Gamma(x, 0) and
    (x - 3/(4L))^3 (x^3 - L x - 1/4).
    """
    k = 3.0 / (4.0 * curve.L)
    expected = np.polymul(np.poly([k, k, k]), [1.0, 0.0, -curve.L, -0.25])
    actual = x_axis_polynomial(curve)
    return float(np.max(np.abs(actual - expected)) / np.max(np.abs(expected)))


def x_axis_roots(curve: SexticCurve, tol: float = ROOT_CLUSTER_TOLERANCE) -> List[float]:
    """Distinct real roots of Gamma(x, 0), clustered to absorb the triple root."""
    roots = np.roots(x_axis_polynomial(curve))
    real = np.sort(roots[np.abs(roots.imag) <= tol].real)
    distinct: List[List[float]] = []
    for r in real:
        if distinct and r - distinct[-1][-1] <= tol:
            distinct[-1].append(float(r))
        else:
            distinct.append([float(r)])
    return [float(np.mean(group)) for group in distinct]


def singularity_report(curve: SexticCurve) -> Dict[str, Any]:
    """
    Measured singularity data of Gamma.

    Checks that the gradient vanishes at the three real cusps and lists the
    (nodes, cusps) splits compatible with class 3, i.e. 2 tau + 3 kappa = 27.
    """
    scale = curve.max_abs_coefficient
    residuals = []
    for x, y in cusp_points(curve.L):
        gx, gy = sextic_gradient(x, y, curve)
        residuals.append(float(math.hypot(gx, gy)) / scale)
    worst = max(residuals)
    real_cusps = int(sum(r <= 1e-8 for r in residuals))
    splits = [
        (tau, (27 - 2 * tau) // 3)
        for tau in range(0, 14)
        if (27 - 2 * tau) % 3 == 0 and (27 - 2 * tau) // 3 >= real_cusps
    ]
    return {
        "L": curve.L,
        "degree": 6,
        "class": 3,
        "cusp_gradient_residuals": residuals,
        "max_cusp_gradient": worst,
        "real_cusps_detected": real_cusps,
        "plucker_splits": [{"nodes": t, "cusps": k} for t, k in splits],
        "plucker_class": [30 - 2 * t - 3 * k for t, k in splits],
        "passed": bool(worst <= 1e-8),
    }


def foci_check(L: float) -> Dict[str, Any]:
    """
    The six lines joining the circular points (1, +-i, 0) to the foci
    (cos 2k pi/3, sin 2k pi/3, 1) are tangent lines, so they lie on the cubic.
    """
    scale = DualCubic(L).max_abs_coefficient
    values = []
    lines = []
    for k in range(3):
        focus = np.array([math.cos(k * TWO_PI_3), math.sin(k * TWO_PI_3), 1.0])
        for sign in (1.0, -1.0):
            line = np.cross(np.array([1.0, sign * 1j, 0.0]), focus)
            line = line / np.max(np.abs(line))
            lines.append([complex(c) for c in line])
            values.append(float(abs(dual_cubic_eval(*line, L)) / scale))
    return {
        "L": L,
        "lines": [[(c.real, c.imag) for c in line] for line in lines],
        "values": values,
        "max_value": max(values),
        "passed": bool(max(values) <= settings.strict_equality_tolerance),
    }
