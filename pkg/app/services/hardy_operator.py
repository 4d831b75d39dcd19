"""
Truncated matrix representations of C_phi on H^2 and the Guyker basis.

Every function-valued quantity is a coefficient vector in the monomial
basis, so one inner-product routine serves all modules.
"""
import math
from typing import Iterator, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
import structlog
from scipy import linalg as sla

from app.core.exceptions import DomainError, TruncationError
from app.models.disk import EllipticSymbol, TaylorSeries
from app.models.operator import BasisTag, GuykerBasis, OperatorMatrix
from app.services.disk_maps import kernel_series, phi_involution, series_times_moebius
from config import settings

logger = structlog.get_logger(__name__)

VectorsLike = Union[Sequence[TaylorSeries], np.ndarray]


def _rows(vectors: VectorsLike) -> np.ndarray:
    if isinstance(vectors, np.ndarray):
        return np.atleast_2d(vectors)
    return np.vstack([v.coeffs for v in vectors])


# ---------------------------------------------------------------------------
# Operator matrices
# ---------------------------------------------------------------------------


def _monomial_matrix(sym: EllipticSymbol, N: int) -> np.ndarray:
    # Column k holds the coefficients of phi^k; phi^(k+1) = phi^k * phi.
    entries = np.zeros((N, N), dtype=complex)
    column = np.zeros(N, dtype=complex)
    column[0] = 1.0
    entries[:, 0] = column
    for k in range(1, N):
        column = series_times_moebius(column, sym.map)
        entries[:, k] = column
    return entries


def _guyker_matrix(sym: EllipticSymbol, N: int) -> np.ndarray:
    """
    Compression of C_phi onto span{e_0, ..., e_(N-1)}.

    C e_n = omega^n (e_n + (1 - omega) sum_(j>=1) conj(a)^j e_(n+j)), so the
    section is lower triangular and exact.
    """
    omega = sym.multiplier
    n = np.arange(N)
    gap = n[:, None] - n[None, :]
    powers = np.where(gap > 0, np.conj(sym.a) ** np.maximum(gap, 0), 0.0)
    entries = (1.0 - omega) * powers * (omega ** n)[None, :]
    entries[n, n] = omega ** n
    return entries


def composition_matrix(
    sym: EllipticSymbol,
    N: int,
    basis: Literal["monomial", "guyker"] = "monomial",
) -> OperatorMatrix:
    """
    Dense N x N compression of C_phi.

    Args:
        sym: Elliptic symbol
        N: Truncation order, N >= 2
        basis: "monomial" (column k = Taylor coefficients of phi^k) or
            "guyker" (exact section in the Guyker basis at sym.a)

    Returns:
        The operator matrix tagged with its basis

    Raises:
        DomainError: If N < 2 or the basis tag is unknown
    """
    if N < 2:
        raise DomainError(f"Truncation order must be at least 2, got N={N}")
    tag = BasisTag(basis)
    if tag is BasisTag.MONOMIAL:
        entries = _monomial_matrix(sym, N)
    else:
        entries = _guyker_matrix(sym, N)
    logger.debug("Composition matrix built", N=N, basis=tag.value, p=sym.p, modulus=sym.modulus)
    return OperatorMatrix(entries=entries, basis=tag, symbol=sym)


def adjoint(T: OperatorMatrix) -> OperatorMatrix:
    """Conjugate transpose; compression commutes with taking adjoints."""
    return OperatorMatrix(entries=T.entries.conj().T, basis=T.basis, symbol=T.symbol)


# ---------------------------------------------------------------------------
# Guyker basis and eigenspaces of the adjoint
# ---------------------------------------------------------------------------


def iter_guyker_vectors(a: complex, N: int) -> Iterator[np.ndarray]:
    """
    Stream e_0, e_1, ... truncated to N coefficients, e_j = k_a phi_a^j.

    Only the current vector is held in memory.
    """
    phi_a = phi_involution(a)
    current = kernel_series(a, N).coeffs.copy()
    while True:
        yield current
        current = series_times_moebius(current, phi_a)


def guyker_basis(a: complex, J: int, N: int) -> GuykerBasis:
    """
    First J vectors of the Guyker basis at a, truncated to N coefficients.

    Raises:
        DomainError: If |a| >= 1 or J is not in [1, N]
    """
    if not 1 <= J <= N:
        raise DomainError(f"Need 1 <= J <= N, got J={J}, N={N}")
    if J > N // 2:
        logger.warning("Guyker basis uses more than N/2 vectors; Gram deviation grows", J=J, N=N)
    matrix = np.empty((J, N), dtype=complex)
    vectors = iter_guyker_vectors(a, N)
    for j in range(J):
        matrix[j] = next(vectors)
    return GuykerBasis(a=complex(a), matrix=matrix)


def _check_eigenspace_args(sym: EllipticSymbol, r: int, Jmax: int) -> None:
    if sym.a == 0:
        raise DomainError("Eigenspace bases need a non-zero fixed point")
    if not 0 <= r < sym.p:
        raise DomainError(f"Eigenspace index must satisfy 0 <= r < {sym.p}, got r={r}")
    if Jmax < 1:
        raise DomainError(f"Need at least one basis vector, got Jmax={Jmax}")


def eigenspace_rows(sym: EllipticSymbol, r: int, Jmax: int, N: int) -> np.ndarray:
    """
    Jmax x N matrix whose rows span the mu^r eigenspace of the adjoint.

    Row j is (e_n - a e_(n-1))/sqrt(1 + |a|^2) with n = p j + r; the row for
    n = 0 is e_0 itself.
    """
    _check_eigenspace_args(sym, r, Jmax)
    a, p = sym.a, sym.p
    scale = math.sqrt(1.0 + abs(a) ** 2)
    wanted = {p * j + r: j for j in range(Jmax)}
    n_max = p * (Jmax - 1) + r

    rows = np.empty((Jmax, N), dtype=complex)
    previous = np.zeros(N, dtype=complex)
    for n, current in enumerate(iter_guyker_vectors(a, N)):
        if n in wanted:
            rows[wanted[n]] = current if n == 0 else (current - a * previous) / scale
        if n == n_max:
            break
        previous = current
    return rows


def eigenspace_basis(sym: EllipticSymbol, r: int, Jmax: int, N: int) -> List[TaylorSeries]:
    """
    Orthonormal vectors spanning (up to truncation) the eigenspace of C_phi*
    for eigenvalue conj(phi'(a))^r.

    Raises:
        DomainError: If a = 0 or r is out of range
    """
    return [TaylorSeries(row) for row in eigenspace_rows(sym, r, Jmax, N)]


def adjoint_eigen_residual(T_adj: OperatorMatrix, vectors: VectorsLike, eigenvalue: complex) -> float:
    """max over the given vectors of ||T* v - eigenvalue v||."""
    rows = _rows(vectors)
    images = rows @ T_adj.entries.T
    return float(np.max(np.linalg.norm(images - eigenvalue * rows, axis=1)))


# ---------------------------------------------------------------------------
# Inner products, samples and projections
# ---------------------------------------------------------------------------


def inner_product(u: TaylorSeries, v: TaylorSeries) -> complex:
    """<u, v> = sum_n u_n conj(v_n)."""
    if u.N != v.N:
        raise DomainError(f"Truncation mismatch: {u.N} vs {v.N}")
    return complex(np.vdot(v.coeffs, u.coeffs))


def norm(u: TaylorSeries) -> float:
    return float(np.linalg.norm(u.coeffs))


def eigenspace_sample(basis: VectorsLike, coeffs: Sequence[complex]) -> TaylorSeries:
    """
    Unit-norm combination sum_j coeffs[j] basis[j].

    Raises:
        DomainError: If the coefficient vector is zero, has the wrong length,
            or the combination vanishes
    """
    rows = _rows(basis)
    c = np.asarray(coeffs, dtype=complex).reshape(-1)
    if c.size != rows.shape[0]:
        raise DomainError(f"Expected {rows.shape[0]} coefficients, got {c.size}")
    if not np.any(c):
        raise DomainError("Coefficient vector is zero")
    combination = c @ rows
    length = np.linalg.norm(combination)
    if length == 0.0:
        raise DomainError("Linear combination vanishes")
    return TaylorSeries(combination / length)


def truncation_budget(vectors: VectorsLike) -> float:
    """epsilon_trunc: max |Gram - I| of a nominally orthonormal family."""
    rows = _rows(vectors)
    gram = rows @ rows.conj().T
    return float(np.max(np.abs(gram - np.eye(rows.shape[0]))))


def project_orthonormal(f: Union[TaylorSeries, np.ndarray], rows: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Orthogonal projection onto the span of orthonormal rows.

    Returns:
        (coefficients <f, row_j>, projected coefficient vector)
    """
    coeffs = f.coeffs if isinstance(f, TaylorSeries) else np.asarray(f, dtype=complex)
    weights = rows.conj() @ coeffs
    return weights, weights @ rows


def decompose_least_squares(
    f: Union[TaylorSeries, np.ndarray],
    bases: Sequence[np.ndarray],
) -> Tuple[List[np.ndarray], float]:
    """
    Split f into components along several truncated eigenspace bases.

    Solves the stacked least-squares problem so that the split stays
    meaningful when truncation spoils exact orthogonality.

    Returns:
        (one component vector per basis, residual norm of the fit)
    """
    coeffs = f.coeffs if isinstance(f, TaylorSeries) else np.asarray(f, dtype=complex)
    stacked = np.vstack(bases)
    x, _, _, _ = sla.lstsq(stacked.T, coeffs)
    components = []
    start = 0
    for rows in bases:
        stop = start + rows.shape[0]
        components.append(x[start:stop] @ rows)
        start = stop
    residual = float(np.linalg.norm(coeffs - sum(components)))
    return components, residual


# ---------------------------------------------------------------------------
# Truncation control
# ---------------------------------------------------------------------------


def _tail_mass(a: complex, n: int, N: int) -> float:
    # Coefficients are exact up to the truncation length, so measure at 2N.
    vectors = iter_guyker_vectors(a, 2 * N)
    for _ in range(n):
        next(vectors)
    coeffs = next(vectors)
    return float(np.sum(np.abs(coeffs[N:]) ** 2))


def required_truncation(a: complex, n_max: int, tol: Optional[float] = None) -> int:
    """
    Smallest N in the doubling ladder 256, 512, ... at which e_(n_max) keeps
    all but tol of its mass in the first N coefficients.

    Raises:
        TruncationError: If the ladder passes settings.truncation_max_n
    """
    tol = settings.truncation_tail_tolerance if tol is None else tol
    N = settings.truncation_start_n
    # The coefficient mass of e_n is centred near n (1+|a|^2)/(1-|a|^2);
    # rungs below half of that cannot pass.
    centre = n_max * (1.0 + abs(a) ** 2) / (1.0 - abs(a) ** 2)
    while 2 * N <= centre and N < settings.truncation_max_n:
        N *= 2
    while N <= settings.truncation_max_n:
        if N > n_max and _tail_mass(a, n_max, N) <= tol:
            logger.debug("Truncation resolved", n_max=n_max, N=N, modulus=abs(a))
            return N
        N *= 2
    raise TruncationError(
        f"Guyker vector e_{n_max} at |a|={abs(a):.6g} needs more than "
        f"{settings.truncation_max_n} coefficients"
    )


def default_truncation(a: complex) -> int:
    return settings.default_truncation(abs(a))
