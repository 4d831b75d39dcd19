"""
Closed-form ellipse for order-2 symbols and the boundary-exclusion statistics.

For an order-2 symbol with fixed point a != 0 the numerical range is the open
ellipse with foci +-1 and semi-axes A = (1+|a|^2)/(1-|a|^2),
B = 2|a|/(1-|a|^2). The adjoint splits H^2 into its (+1) and (-1)
eigenspaces; every unit f = f1 + f2 gives q = <C* f, f> with
(|1-q| + |1+q|)/2 < A.
"""
import cmath
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import structlog

from app.core.exceptions import DomainError
from app.models.curves import EllipseModel
from app.models.disk import EllipticSymbol, TaylorSeries
from app.models.numrange import BoundaryPolyline, SupportSample
from app.models.operator import OperatorMatrix
from app.services.hardy_operator import (
    decompose_least_squares,
    eigenspace_rows,
    inner_product,
    iter_guyker_vectors,
    norm,
    required_truncation,
)
from config import settings

logger = structlog.get_logger(__name__)

# |f| must equal 1 to this tolerance in exclusion_statistic.
UNIT_NORM_TOLERANCE = 1e-10


@dataclass(frozen=True)
class ExclusionStatistic:
    """Boundary-exclusion data for one unit vector."""

    q: complex
    s: float
    id21_residual: float
    norm_plus: float
    norm_minus: float
    delta: float
    fit_residual: float

    @property
    def correlation_bound(self) -> float:
        """1/sqrt(1 - delta^2), the ellipse parameter reachable with this correlation."""
        return 1.0 / math.sqrt(1.0 - self.delta ** 2) if self.delta < 1.0 else math.inf


@dataclass(frozen=True, eq=False)
class PairFamily:
    """Geometric-weight pair approaching the correlation bound."""

    f1: TaylorSeries
    f2: TaylorSeries
    rho: float
    J: int
    correlation: float


def _check_fixed_point(a: complex) -> complex:
    a = complex(a)
    if a == 0:
        raise DomainError("The ellipse model needs a non-zero fixed point")
    if abs(a) >= 1.0:
        raise DomainError(f"Fixed point must lie in the open unit disk, got |a|={abs(a)}")
    return a


def ellipse_params(a: complex) -> EllipseModel:
    """
    Semi-axes of the order-2 ellipse; only |a| matters.

    Raises:
        DomainError: If a = 0 or |a| >= 1
    """
    a = _check_fixed_point(a)
    r2 = abs(a) ** 2
    return EllipseModel(a=a, A=(1.0 + r2) / (1.0 - r2), B=2.0 * abs(a) / (1.0 - r2))


def ellipse_support(model: EllipseModel, alpha):
    """sqrt(A^2 cos^2 alpha + B^2 sin^2 alpha); vectorized over alpha."""
    return np.sqrt((model.A * np.cos(alpha)) ** 2 + (model.B * np.sin(alpha)) ** 2)


def ellipse_boundary_point(model: EllipseModel, alpha):
    """Point where the support line at alpha touches the ellipse."""
    h = ellipse_support(model, alpha)
    return (model.A ** 2 * np.cos(alpha) + 1j * model.B ** 2 * np.sin(alpha)) / h


def ellipse_samples(model: EllipseModel, angles: Sequence[float]) -> List[SupportSample]:
    ordered = np.sort(np.asarray(angles, dtype=float))
    lam = ellipse_support(model, ordered)
    points = ellipse_boundary_point(model, ordered)
    return [SupportSample(alpha=float(al), lam=float(l), point=complex(z)) for al, l, z in zip(ordered, lam, points)]


def ellipse_polyline(model: EllipseModel, angles: Sequence[float]) -> BoundaryPolyline:
    return BoundaryPolyline(points=ellipse_boundary_point(model, np.sort(np.asarray(angles, dtype=float))))


def pair_bound(a: complex) -> float:
    """2|a|/(1+|a|^2), the strict upper bound on pair correlations."""
    return 2.0 * abs(a) / (1.0 + abs(a) ** 2)


def correlation_ellipse_bound(delta: float) -> float:
    """1/sqrt(1 - delta^2); at delta = pair_bound(a) this equals A."""
    if not 0.0 <= delta < 1.0:
        raise DomainError(f"Correlation must lie in [0, 1), got {delta}")
    return 1.0 / math.sqrt(1.0 - delta ** 2)


def _require_order2(sym: EllipticSymbol) -> None:
    if sym.p != 2:
        raise DomainError(f"Order-2 machinery called with a symbol of order {sym.p}")


def pair_correlation(sym: EllipticSymbol, f1: TaylorSeries, f2: TaylorSeries) -> Tuple[float, float]:
    """
    Normalized inner product of the two eigenspace components.

    Returns:
        (delta, theta) with <f1, f2>/(|f1| |f2|) = delta exp(i theta)

    Raises:
        DomainError: If the symbol is not of order 2 or a vector is zero
    """
    _require_order2(sym)
    n1, n2 = norm(f1), norm(f2)
    if n1 == 0.0 or n2 == 0.0:
        raise DomainError("Pair correlation needs non-zero vectors")
    z = inner_product(f1, f2) / (n1 * n2)
    return float(abs(z)), float(cmath.phase(z))


def default_pair_bases(sym: EllipticSymbol, N: int, m: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
    """Rows spanning the (+1) and (-1) eigenspaces, m vectors each."""
    _require_order2(sym)
    m = settings.sampler_basis_size if m is None else m
    return eigenspace_rows(sym, 0, m, N), eigenspace_rows(sym, 1, m, N)


def exclusion_statistic(
    T_adj: OperatorMatrix,
    f: Union[TaylorSeries, np.ndarray],
    bases: Optional[Tuple[np.ndarray, np.ndarray]] = None,
) -> ExclusionStatistic:
    """
    q = <T* f, f>, s = (|1-q| + |1+q|)/2 and the residual of
    |1-q|^2/4 - |1+q|^2/4 = |f2|^2 - |f1|^2.

    Args:
        T_adj: Compressed adjoint of an order-2 composition operator
        f: Unit vector
        bases: Rows spanning the (+1) and (-1) eigenspaces; by default the
            first settings.sampler_basis_size vectors of each

    Raises:
        DomainError: If f is not a unit vector or the symbol is not of order 2
    """
    _require_order2(T_adj.symbol)
    coeffs = f.coeffs if isinstance(f, TaylorSeries) else np.asarray(f, dtype=complex)
    if coeffs.size != T_adj.n:
        raise DomainError(f"Vector of length {coeffs.size} does not match matrix size {T_adj.n}")
    length = float(np.linalg.norm(coeffs))
    if abs(length - 1.0) > UNIT_NORM_TOLERANCE:
        raise DomainError(f"Exclusion statistic needs a unit vector, got |f|={length:.12g}")
    if bases is None:
        bases = default_pair_bases(T_adj.symbol, T_adj.n)

    q = complex(np.vdot(coeffs, T_adj.entries @ coeffs))
    s = 0.5 * (abs(1.0 - q) + abs(1.0 + q))

    (f1, f2), fit_residual = decompose_least_squares(coeffs, list(bases))
    n1, n2 = float(np.linalg.norm(f1)), float(np.linalg.norm(f2))
    lhs = 0.25 * abs(1.0 - q) ** 2 - 0.25 * abs(1.0 + q) ** 2
    id21_residual = abs(lhs - (n2 ** 2 - n1 ** 2))
    delta = abs(np.vdot(f2, f1)) / (n1 * n2) if min(n1, n2) > UNIT_NORM_TOLERANCE else 0.0

    return ExclusionStatistic(
        q=q,
        s=s,
        id21_residual=float(id21_residual),
        norm_plus=n1,
        norm_minus=n2,
        delta=float(delta),
        fit_residual=fit_residual,
    )


def pair_family_correlation(a: complex, rho: float) -> float:
    """Closed-form correlation of pair_geometric_family(a, rho) as the tail vanishes."""
    r2 = abs(a) ** 2
    s2 = 1.0 + r2
    return math.sqrt(r2 * (1.0 + math.sqrt(rho)) ** 2 / s2 ** 2 + r2 * (1.0 - rho) / s2)


def pair_geometric_family(
    a: complex,
    rho: float,
    N: Optional[int] = None,
    tail: Optional[float] = None,
) -> PairFamily:
    """
    f2 = sum_j beta_j u_j in the (-1) eigenspace with
    beta_j = exp(-2 i j arg a) sqrt((1 - rho) rho^j), and f1 its orthogonal
    projection onto the (+1) eigenspace.

    u_j = (e_(2j+1) - a e_(2j))/s and w_k = (e_(2k) - a e_(2k-1))/s, w_0 = e_0,
    overlap only for k = j (-a/s^2, or -a/s when j = 0) and k = j + 1
    (-conj(a)/s^2), so the projection weights are exact. The correlation
    <f1, f2>/(|f1| |f2|) = |f1|/|f2| tends to 2|a|/(1+|a|^2) as rho -> 1.

    Raises:
        DomainError: If rho is not in (0, 1) or a = 0
    """
    a = _check_fixed_point(a)
    if not 0.0 < rho < 1.0:
        raise DomainError(f"Geometric ratio must lie in (0, 1), got rho={rho}")
    tail = settings.extremal_tail if tail is None else tail
    J = max(1, math.ceil(math.log(tail) / math.log(rho)))
    n_max = 2 * J
    N = required_truncation(a, n_max) if N is None else N

    s = math.sqrt(1.0 + abs(a) ** 2)
    j = np.arange(J)
    beta = np.exp(-2j * j * cmath.phase(a)) * np.sqrt((1.0 - rho) * rho ** j)
    weights = np.zeros(J + 1, dtype=complex)
    weights[0] = beta[0] * (-a / s)
    weights[1:J] += beta[1:] * (-a / s ** 2)
    weights[1:] += beta * (-a.conjugate() / s ** 2)

    f1 = np.zeros(N, dtype=complex)
    f2 = np.zeros(N, dtype=complex)
    previous = np.zeros(N, dtype=complex)
    for n, current in enumerate(iter_guyker_vectors(a, N)):
        if n == 0:
            f1 += weights[0] * current
        elif n % 2 == 1:
            f2 += beta[n // 2] * (current - a * previous) / s
        else:
            f1 += weights[n // 2] * (current - a * previous) / s
        if n == n_max:
            break
        previous = current

    correlation = float(np.linalg.norm(weights) / np.linalg.norm(beta))
    logger.debug("Pair family built", rho=rho, J=J, N=N, correlation=correlation)
    return PairFamily(f1=TaylorSeries(f1), f2=TaylorSeries(f2), rho=rho, J=J, correlation=correlation)
