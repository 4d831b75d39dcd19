"""
Eigenspace correlations and quadratic-form identities for order-3 symbols.

For an order-3 symbol the adjoint splits H^2 into eigenspaces for 1, mu and
mu^2. A vector f = f1 + f2 + f3 is described by its component norms and the
three normalized correlations delta_k exp(i theta_k):

    delta_1 <-> <f2, f3>,   delta_2 <-> <f3, f1>,   delta_3 <-> <f1, f2>.
"""
import cmath
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np
import structlog

from app.core.exceptions import DomainError
from app.models.curves import CorrelationTriple
from app.models.disk import EllipticSymbol, TaylorSeries
from app.models.operator import OperatorMatrix
from app.services.hardy_operator import (
    adjoint,
    composition_matrix,
    default_truncation,
    eigenspace_rows,
    inner_product,
    iter_guyker_vectors,
    norm,
    required_truncation,
    truncation_budget,
)
from config import settings

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class CorrelationBounds:
    """Upper bounds on the three correlations for a given |a|."""

    delta: float
    delta3: float
    pair_sum: float

    @classmethod
    def for_fixed_point(cls, a: complex) -> "CorrelationBounds":
        r = abs(a)
        delta = r / (1.0 + r * r)
        return cls(delta=delta, delta3=r / math.sqrt(1.0 + r * r), pair_sum=2.0 * delta * delta)


@dataclass(frozen=True, eq=False)
class ExtremalFamily:
    """Three unit vectors, one per eigenspace, with prescribed correlation phases."""

    f1: TaylorSeries
    f2: TaylorSeries
    f3: TaylorSeries
    rho: float
    J: int
    tail: float

    def __iter__(self) -> Iterator[TaylorSeries]:
        return iter((self.f1, self.f2, self.f3))


@dataclass(frozen=True)
class IdentityResiduals:
    """Residuals of the quadratic-form expansion and the norm expansion."""

    residual_1: float
    residual_2: float
    single_factor_gap: float


def correlation_triple(
    f1: TaylorSeries,
    f2: TaylorSeries,
    f3: TaylorSeries,
    provenance: str = "direct",
) -> CorrelationTriple:
    """
    delta and theta from the normalized pairwise inner products.

    Raises:
        DomainError: If any component is zero
    """
    norms = [norm(f) for f in (f1, f2, f3)]
    if min(norms) == 0.0:
        raise DomainError("Correlation triple needs three non-zero vectors")
    n1, n2, n3 = norms
    pairs = (
        inner_product(f2, f3) / (n2 * n3),
        inner_product(f3, f1) / (n3 * n1),
        inner_product(f1, f2) / (n1 * n2),
    )
    return CorrelationTriple(
        delta=tuple(float(abs(z)) for z in pairs),
        theta=tuple(float(cmath.phase(z)) for z in pairs),
        provenance=provenance,
    )


def _extremal_phases(theta: Sequence[float], a: complex) -> Tuple[float, float, float]:
    psi = cmath.phase(a)
    t1, t2, t3 = theta
    return -psi - t1, -2.0 * psi - t1 - t2, -3.0 * psi - t1 - t2 - t3


def extremal_coefficients(theta: Sequence[float], rho: float, a: complex, J: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Weights on the three eigenspace bases (first J vectors each).

    alpha_0 = 0, alpha_(j+1) = exp(i(eta2 + j eta3)) r_j, beta_j = exp(i j eta3) r_j,
    gamma_j = exp(i(eta1 + j eta3)) r_j with r_j = sqrt((1 - rho) rho^j).
    """
    eta1, eta2, eta3 = _extremal_phases(theta, a)
    j = np.arange(J)
    r = np.sqrt((1.0 - rho) * rho ** j)
    alpha = np.zeros(J + 1, dtype=complex)
    alpha[1:] = np.exp(1j * (eta2 + j * eta3)) * r
    beta = np.exp(1j * j * eta3) * r
    gamma = np.exp(1j * (eta1 + j * eta3)) * r
    return alpha, beta, gamma


def extremal_closed_form(theta: Sequence[float], rho: float, a: complex) -> Tuple[complex, complex, complex]:
    """Limiting normalized inner products (f2,f3), (f3,f1), (f1,f2) of the extremal family."""
    delta = abs(a) / (1.0 + abs(a) ** 2)
    t1, t2, t3 = theta
    return (
        -cmath.exp(1j * t1) * delta,
        -cmath.exp(1j * t2) * delta,
        -cmath.exp(1j * t3) * delta * math.sqrt(rho),
    )


def extremal_family(
    theta: Sequence[float],
    rho: float,
    a: complex,
    J: Optional[int] = None,
    N: Optional[int] = None,
) -> ExtremalFamily:
    """
    Geometric-weight vectors whose correlations tend to
    (-e^{i theta1} Delta, -e^{i theta2} Delta, -e^{i theta3} Delta sqrt(rho)).

    Args:
        theta: Target phases
        rho: Geometric ratio in (0, 1)
        a: Non-zero fixed point
        J: Number of weights per eigenspace; by default rho^J <= settings.extremal_tail
        N: Truncation; by default large enough for e_(3J)

    Raises:
        DomainError: If rho is not in (0, 1) or a = 0
    """
    a = complex(a)
    if a == 0 or abs(a) >= 1.0:
        raise DomainError(f"Extremal family needs 0 < |a| < 1, got |a|={abs(a)}")
    if not 0.0 < rho < 1.0:
        raise DomainError(f"Geometric ratio must lie in (0, 1), got rho={rho}")
    if J is None:
        J = max(1, math.ceil(math.log(settings.extremal_tail) / math.log(rho)))
    n_max = 3 * J
    N = required_truncation(a, n_max) if N is None else N

    alpha, beta, gamma = extremal_coefficients(theta, rho, a, J)
    s = math.sqrt(1.0 + abs(a) ** 2)
    f = np.zeros((3, N), dtype=complex)
    previous = np.zeros(N, dtype=complex)
    for n, current in enumerate(iter_guyker_vectors(a, N)):
        if n > 0:
            j, r = divmod(n, 3)
            weight = (alpha[j], beta[j] if j < J else 0.0, gamma[j] if j < J else 0.0)[r]
            if weight != 0:
                f[r] += weight * (current - a * previous) / s
        if n == n_max:
            break
        previous = current

    logger.debug("Extremal family built", rho=rho, J=J, N=N)
    return ExtremalFamily(
        f1=TaylorSeries(f[0]),
        f2=TaylorSeries(f[1]),
        f3=TaylorSeries(f[2]),
        rho=rho,
        J=J,
        tail=float(rho ** J),
    )


def _require_order3(sym: EllipticSymbol) -> None:
    if sym.p != 3:
        raise DomainError(f"Quadratic-form identities are stated for order 3, got p={sym.p}")


def assemble_quadratic_form(mu: complex, norms: Sequence[float], pairs: Sequence[complex]) -> complex:
    """
    <T* f, f> from the component norms and X = <f2,f3>, Y = <f3,f1>, Z = <f1,f2>:

        n1^2 + mu n2^2 + mu^2 n3^2 + 2Re(mu X) + mu 2Re(mu Y) + mu^2 2Re(mu Z).
    """
    n1, n2, n3 = norms
    X, Y, Z = pairs
    return (
        n1 ** 2
        + mu * n2 ** 2
        + mu ** 2 * n3 ** 2
        + 2.0 * (mu * X).real
        + mu * 2.0 * (mu * Y).real
        + mu ** 2 * 2.0 * (mu * Z).real
    )


def quadratic_form_identity(
    sym: EllipticSymbol,
    f1: TaylorSeries,
    f2: TaylorSeries,
    f3: TaylorSeries,
    T_adj: OperatorMatrix,
) -> IdentityResiduals:
    """
    Check <T* f, f> and |f|^2 against their expansions in (delta, theta, norms).

    The Hermitian expansion |f|^2 = sum |f_k|^2 + 2 Re(X + Y + Z) is used;
    single_factor_gap measures how far a variant with a single factor 2 on
    the (f1, f2) term would be off.

    Raises:
        DomainError: If the symbol is not of order 3 or f vanishes
    """
    _require_order3(sym)
    f = f1.coeffs + f2.coeffs + f3.coeffs
    total = float(np.linalg.norm(f))
    if total == 0.0:
        raise DomainError("Quadratic-form identity needs a non-zero f")

    norms = [norm(g) for g in (f1, f2, f3)]
    if min(norms) > 0.0:
        triple = correlation_triple(f1, f2, f3)
        n1, n2, n3 = norms
        scales = (n2 * n3, n3 * n1, n1 * n2)
        pairs = [scales[k] * triple.delta[k] * cmath.exp(1j * triple.theta[k]) for k in range(3)]
    else:
        pairs = [inner_product(f2, f3), inner_product(f3, f1), inner_product(f1, f2)]

    q = complex(np.vdot(f, T_adj.entries @ f))
    rhs1 = assemble_quadratic_form(sym.mu, norms, pairs)
    rhs2 = sum(n * n for n in norms) + 2.0 * sum(z.real for z in pairs)
    single = sum(n * n for n in norms) + pairs[0].real + pairs[1].real + 2.0 * pairs[2].real
    return IdentityResiduals(
        residual_1=float(abs(q - rhs1)),
        residual_2=float(abs(total ** 2 - rhs2)),
        single_factor_gap=float(abs(rhs2 - single)),
    )


# ---------------------------------------------------------------------------
# Batched sampling over truncated eigenspace bases
# ---------------------------------------------------------------------------


class EigenspaceSampler:
    """
    Random vectors drawn from the first m basis vectors of each eigenspace.

    Correlations and quadratic forms are computed from cross-Gram matrices
    of the truncated bases, which is the same algebra as materializing every
    sample, at a fraction of the cost.
    """

    def __init__(self, sym: EllipticSymbol, m: Optional[int] = None, N: Optional[int] = None):
        if sym.a == 0:
            raise DomainError("Eigenspace sampling needs a non-zero fixed point")
        self.sym = sym
        self.m = settings.sampler_basis_size if m is None else m
        if N is None:
            N = max(default_truncation(sym.a), required_truncation(sym.a, sym.p * self.m - 1))
        self.N = N
        self.rows = [eigenspace_rows(sym, r, self.m, N) for r in range(sym.p)]
        self.gram = [[Rk @ Rl.conj().T for Rl in self.rows] for Rk in self.rows]
        # Distinct eigenspaces overlap, so only each basis is nominally orthonormal.
        self.epsilon_trunc = max(truncation_budget(R) for R in self.rows)
        logger.info("Eigenspace sampler ready", p=sym.p, m=self.m, N=N, epsilon_trunc=self.epsilon_trunc)

    @cached_property
    def adjoint_matrix(self) -> OperatorMatrix:
        return adjoint(composition_matrix(self.sym, self.N))

    @cached_property
    def form_blocks(self):
        """A_kl = R_k T*^T R_l^H, so that <T* f, f> = sum c_k A_kl c_l^H."""
        # T*^T = conj(C) for the monomial compression C.
        C = composition_matrix(self.sym, self.N).entries
        images = [(Rk.conj() @ C).conj() for Rk in self.rows]
        return [[Ik @ Rl.conj().T for Rl in self.rows] for Ik in images]

    # -- drawing ---------------------------------------------------------

    def gaussian(self, rng: np.random.Generator, trials: int) -> list:
        return [
            rng.standard_normal((trials, self.m)) + 1j * rng.standard_normal((trials, self.m))
            for _ in range(self.sym.p)
        ]

    def geometric(self, rng: np.random.Generator, trials: int) -> list:
        """
        Geometric weights with aligned phases, which push correlations toward
        their bounds; rho is drawn from (0.3, 0.95).
        """
        p, m, a = self.sym.p, self.m, self.sym.a
        coeffs = [np.zeros((trials, m), dtype=complex) for _ in range(p)]
        rhos = rng.uniform(0.3, 0.95, trials)
        if p == 3:
            thetas = rng.uniform(-math.pi, math.pi, (trials, 3))
            for t in range(trials):
                alpha, beta, gamma = extremal_coefficients(thetas[t], rhos[t], a, m)
                coeffs[0][t], coeffs[1][t], coeffs[2][t] = alpha[:m], beta, gamma
        elif p == 2:
            j = np.arange(m)
            psi = cmath.phase(a)
            for t in range(trials):
                beta = np.exp(-2j * j * psi) * np.sqrt((1.0 - rhos[t]) * rhos[t] ** j)
                coeffs[1][t] = beta
                # Projection weights of f2 on the (+1) basis.
                coeffs[0][t] = beta @ self.gram[1][0]
        else:
            return self.gaussian(rng, trials)
        return coeffs

    def draw(self, rng: np.random.Generator, trials: int) -> list:
        """Half Gaussian, half geometric trials."""
        half = trials // 2
        first = self.gaussian(rng, trials - half)
        second = self.geometric(rng, half)
        return [np.vstack([x, y]) for x, y in zip(first, second)]

    # -- evaluation ------------------------------------------------------

    def inner(self, coeffs: list, k: int, l: int) -> np.ndarray:
        """<f_k, f_l> per trial."""
        return np.einsum("ti,ij,tj->t", coeffs[k], self.gram[k][l], coeffs[l].conj())

    def norms(self, coeffs: list) -> np.ndarray:
        return np.sqrt(np.stack([self.inner(coeffs, k, k).real for k in range(self.sym.p)], axis=1))

    def correlations(self, coeffs: list) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Per-trial (delta, theta, norms) for order 3 in the (f2,f3), (f3,f1),
        (f1,f2) ordering; for order 2 a single (f1, f2) column.
        """
        n = self.norms(coeffs)
        if self.sym.p == 2:
            z = self.inner(coeffs, 0, 1) / (n[:, 0] * n[:, 1])
            return np.abs(z)[:, None], np.angle(z)[:, None], n
        if self.sym.p != 3:
            raise DomainError(f"Correlations are defined for orders 2 and 3, got p={self.sym.p}")
        z = np.stack(
            [
                self.inner(coeffs, 1, 2) / (n[:, 1] * n[:, 2]),
                self.inner(coeffs, 2, 0) / (n[:, 2] * n[:, 0]),
                self.inner(coeffs, 0, 1) / (n[:, 0] * n[:, 1]),
            ],
            axis=1,
        )
        return np.abs(z), np.angle(z), n

    def quadratic_forms(self, coeffs: list) -> Tuple[np.ndarray, np.ndarray]:
        """Per-trial (<T* f, f>, |f|^2) for f = sum of the components."""
        p = self.sym.p
        blocks = self.form_blocks
        q = np.zeros(coeffs[0].shape[0], dtype=complex)
        total = np.zeros(coeffs[0].shape[0], dtype=float)
        for k in range(p):
            for l in range(p):
                q += np.einsum("ti,ij,tj->t", coeffs[k], blocks[k][l], coeffs[l].conj())
                total += self.inner(coeffs, k, l).real
        return q, total

    def components(self, coeffs: list, t: int) -> list:
        """Materialize trial t as one TaylorSeries per eigenspace."""
        return [TaylorSeries(coeffs[k][t] @ self.rows[k]) for k in range(self.sym.p)]

    def __repr__(self) -> str:
        return f"<EigenspaceSampler(p={self.sym.p}, m={self.m}, N={self.N})>"


def observation_suite(a: complex, trials: Optional[int] = None, seed: Optional[int] = None, k: int = 1):
    """Run the correlation-bound suite for the order-3 symbol with fixed point a."""
    from app.suites.observation_suite import ObservationSuite

    return ObservationSuite().run(a=a, trials=trials, seed=seed, k=k)
