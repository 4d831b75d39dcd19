"""
Unit tests for composition matrices, the Guyker basis and eigenspace bases.
"""
import cmath
import math

import numpy as np
import pytest

from app.core.exceptions import DomainError, TruncationError
from app.models.disk import TaylorSeries
from app.models.operator import BasisTag
from app.services.disk_maps import kernel_series
from app.services.hardy_operator import (
    adjoint,
    adjoint_eigen_residual,
    composition_matrix,
    decompose_least_squares,
    default_truncation,
    eigenspace_basis,
    eigenspace_rows,
    eigenspace_sample,
    guyker_basis,
    inner_product,
    norm,
    project_orthonormal,
    required_truncation,
    truncation_budget,
)
from config import settings


@pytest.mark.unit
class TestCompositionMatrix:
    """Monomial and Guyker compressions of C_phi."""

    def test_rotation_is_diagonal(self, rotation3_symbol):
        """A rotation symbol gives diag(1, omega, omega^2, ...)."""
        T = composition_matrix(rotation3_symbol, 12)
        omega = cmath.exp(2j * math.pi / 3)

        assert np.allclose(T.entries, np.diag(omega ** np.arange(12)), atol=1e-14)
        assert T.basis is BasisTag.MONOMIAL

        print("✓ Rotation compresses to a diagonal matrix")

    def test_first_columns(self, order2_matrix):
        """Column 0 is e_0; column 1 holds the series of phi, phi(0) = 0.8."""
        T = order2_matrix.entries

        assert np.allclose(T[:, 0], np.eye(1, 256, 0)[0])
        assert abs(T[0, 1] - 0.8) < 1e-14
        assert abs(T[1, 1] - (0.64 - 1.0)) < 1e-14

        print("✓ Columns 0 and 1 of the order-2 matrix")

    def test_column_norms_bounded(self, order2_matrix):
        """Column k truncates the inner function phi^k, so its norm is at most 1."""
        column_norms = np.linalg.norm(order2_matrix.entries, axis=0)

        assert np.max(column_norms) <= 1.0 + 1e-12
        assert abs(column_norms[1] - 1.0) <= 1e-12

        print("✓ Column norms <= 1")

    def test_small_truncation_rejected(self, order2_symbol):
        """N must be at least 2."""
        with pytest.raises(DomainError):
            composition_matrix(order2_symbol, 1)
        with pytest.raises(ValueError):
            composition_matrix(order2_symbol, 4, basis="fourier")

        print("✓ N = 1 and unknown basis rejected")

    def test_guyker_section_matches_monomial(self, order3_symbol, order3_matrix):
        """<C e_n, e_m> from the monomial matrix equals the exact Guyker section."""
        J = 6
        E = guyker_basis(order3_symbol.a, J, 256).matrix
        projected = E.conj() @ order3_matrix.entries @ E.T
        exact = composition_matrix(order3_symbol, J, basis="guyker")

        assert exact.basis is BasisTag.GUYKER
        assert np.allclose(projected, exact.entries, atol=1e-10)

        print("✓ Guyker section agrees with the projected monomial matrix")

    def test_guyker_section_is_lower_triangular(self, order3_symbol):
        """Entries above the diagonal vanish; the diagonal holds omega^n."""
        T = composition_matrix(order3_symbol, 9, basis="guyker").entries
        omega = order3_symbol.multiplier

        assert np.all(np.triu(T, 1) == 0)
        assert np.allclose(np.diag(T), omega ** np.arange(9))

        print("✓ Guyker section is lower triangular")


@pytest.mark.unit
class TestAdjoint:
    """Conjugate transposes of compressions."""

    def test_diagonal(self, rotation3_symbol):
        """diag(1, omega, omega^2) -> diag(1, conj omega, conj omega^2)."""
        T = composition_matrix(rotation3_symbol, 3)
        omega = cmath.exp(2j * math.pi / 3)

        assert np.allclose(adjoint(T).entries, np.diag(np.conj(omega ** np.arange(3))))

        print("✓ Adjoint of a diagonal matrix")

    def test_involutive(self, order3_matrix):
        """Taking the adjoint twice restores the entries."""
        assert np.array_equal(adjoint(adjoint(order3_matrix)).entries, order3_matrix.entries)
        assert adjoint(order3_matrix).basis is order3_matrix.basis

        print("✓ adjoint o adjoint = identity")

    def test_pairing(self, order3_matrix, order3_adjoint, rng):
        """<T u, v> = <u, T* v>."""
        u = TaylorSeries(rng.standard_normal(256) + 1j * rng.standard_normal(256))
        v = TaylorSeries(rng.standard_normal(256) + 1j * rng.standard_normal(256))
        lhs = inner_product(order3_matrix.apply(u), v)
        rhs = inner_product(u, order3_adjoint.apply(v))

        assert abs(lhs - rhs) <= 1e-11 * max(1.0, abs(lhs))

        print("✓ Adjoint pairing holds")


@pytest.mark.unit
class TestGuykerBasis:
    """e_j = k_a phi_a^j."""

    def test_first_vector_is_kernel(self):
        """e_0 = k_a."""
        basis = guyker_basis(0.5, 4, 64)

        assert np.allclose(basis.matrix[0], kernel_series(0.5, 64).coeffs)

        print("✓ e_0 is the normalized kernel")

    def test_gram_deviation(self):
        """a = 0.5, J = 8, N = 128: Gram matrix within 1e-10 of the identity."""
        basis = guyker_basis(0.5, 8, 128)

        assert basis.gram_deviation() <= 1e-10
        assert basis.J == 8 and basis.N == 128
        assert len(basis.vectors) == 8

        print(f"✓ Gram deviation {basis.gram_deviation():.2e}")

    def test_origin_gives_signed_monomials(self):
        """At a = 0, phi_0(z) = -z, so e_j = (-1)^j z^j."""
        basis = guyker_basis(0.0, 4, 8)
        expected = np.diag((-1.0) ** np.arange(4))

        assert np.allclose(basis.matrix[:, :4], expected)

        print("✓ Guyker basis at the origin")

    def test_invalid_sizes(self):
        """J must lie in [1, N]."""
        with pytest.raises(DomainError):
            guyker_basis(0.5, 0, 16)
        with pytest.raises(DomainError):
            guyker_basis(0.5, 17, 16)

        print("✓ J outside [1, N] rejected")


@pytest.mark.unit
class TestEigenspaces:
    """Eigenspace bases of the adjoint."""

    def test_fixed_point_kernel(self, order3_symbol):
        """r = 0, j = 0 is e_0 = k_a."""
        rows = eigenspace_rows(order3_symbol, 0, 3, 128)

        assert np.allclose(rows[0], kernel_series(0.5, 128).coeffs)

        print("✓ First (+1) eigenvector is k_a")

    def test_order2_first_minus_vector(self, order2_symbol):
        """p = 2, r = 1, j = 0 is (e_1 - 0.5 e_0)/sqrt(1.25)."""
        E = guyker_basis(0.5, 2, 128).matrix
        rows = eigenspace_rows(order2_symbol, 1, 1, 128)

        assert np.allclose(rows[0], (E[1] - 0.5 * E[0]) / math.sqrt(1.25))

        print("✓ First (-1) eigenvector of the order-2 adjoint")

    @pytest.mark.parametrize("r", [0, 1, 2])
    def test_adjoint_eigen_residual(self, order3_symbol, order3_adjoint, r):
        """p = 3, a = 0.5, N = 256, Jmax = 16: ||T* v - mu^r v|| <= 1e-8."""
        vectors = eigenspace_basis(order3_symbol, r, 16, 256)
        residual = adjoint_eigen_residual(order3_adjoint, vectors, order3_symbol.mu ** r)

        assert residual <= 1e-8

        print(f"✓ r={r}: eigen residual {residual:.2e}")

    @pytest.mark.parametrize("r", [0, 1, 2])
    def test_bases_are_orthonormal(self, order3_symbol, r):
        """Rows of one eigenspace basis are orthonormal."""
        rows = eigenspace_rows(order3_symbol, r, 8, 256)

        assert truncation_budget(rows) <= 1e-12

        print(f"✓ r={r}: eigenspace rows are orthonormal")

    def test_eigenspaces_not_mutually_orthogonal(self, order3_symbol):
        """<e_0, (e_1 - a e_0)/s> = -conj(a)/s, so distinct eigenspaces overlap."""
        e0 = eigenspace_rows(order3_symbol, 0, 1, 128)[0]
        v1 = eigenspace_rows(order3_symbol, 1, 1, 128)[0]

        assert abs(np.vdot(v1, e0) + 0.5 / math.sqrt(1.25)) <= 1e-12

        print("✓ Eigenspaces of the adjoint are not orthogonal")

    def test_requires_nonzero_fixed_point(self, rotation3_symbol, order3_symbol):
        """a = 0 and r out of range are rejected."""
        with pytest.raises(DomainError):
            eigenspace_basis(rotation3_symbol, 0, 4, 32)
        with pytest.raises(DomainError):
            eigenspace_basis(order3_symbol, 3, 4, 32)

        print("✓ Invalid eigenspace requests rejected")


@pytest.mark.unit
class TestInnerProducts:
    """Inner products, samples and projections."""

    def test_monomial(self):
        """<z, z> = 1 and <z, 1> = 0."""
        z = TaylorSeries([0, 1, 0])
        one = TaylorSeries([1, 0, 0])

        assert inner_product(z, z) == 1
        assert inner_product(z, one) == 0

        print("✓ Monomials are orthonormal")

    def test_linear_in_first_argument(self):
        """<c u, v> = c <u, v>."""
        u = TaylorSeries([1, 2j, 0])
        v = TaylorSeries([1j, 1, 1])

        assert abs(inner_product(TaylorSeries(3j * u.coeffs), v) - 3j * inner_product(u, v)) < 1e-14

        print("✓ Inner product is linear in the first slot")

    def test_kernel_norm(self):
        """<k_a, k_a> = 1 - |a|^(2N)."""
        k = kernel_series(0.5, 10)

        assert abs(inner_product(k, k) - (1.0 - 0.5 ** 20)) < 1e-14

        print("✓ Truncated kernel norm")

    def test_mismatch(self):
        """Different truncations are rejected."""
        with pytest.raises(DomainError):
            inner_product(TaylorSeries([1, 0]), TaylorSeries([1, 0, 0]))

        print("✓ Truncation mismatch rejected")

    def test_sample_single_vector(self, order3_symbol):
        """A single basis vector with coefficient 1 is returned unchanged."""
        basis = eigenspace_basis(order3_symbol, 0, 1, 64)
        sample = eigenspace_sample(basis, [1.0])

        assert np.allclose(sample.coeffs, basis[0].coeffs / norm(basis[0]))

        print("✓ Single-vector sample")

    def test_sample_is_unit(self, order3_symbol, rng):
        """Random coefficients give a unit vector."""
        basis = eigenspace_rows(order3_symbol, 1, 8, 128)
        sample = eigenspace_sample(basis, rng.standard_normal(8) + 1j * rng.standard_normal(8))

        assert abs(norm(sample) - 1.0) <= 1e-10

        print("✓ Samples are normalized")

    def test_sample_zero_coefficients(self, order3_symbol):
        """A zero coefficient vector is rejected."""
        basis = eigenspace_rows(order3_symbol, 1, 4, 64)

        with pytest.raises(DomainError):
            eigenspace_sample(basis, np.zeros(4))
        with pytest.raises(DomainError):
            eigenspace_sample(basis, np.ones(3))

        print("✓ Zero and wrongly sized coefficients rejected")

    def test_projection_and_least_squares(self, order3_symbol, rng):
        """Least squares splits a sum; projection recovers a single component."""
        bases = [eigenspace_rows(order3_symbol, r, 6, 256) for r in range(3)]
        weights = [rng.standard_normal(6) + 1j * rng.standard_normal(6) for _ in range(3)]
        parts = [w @ B for w, B in zip(weights, bases)]
        f = TaylorSeries(sum(parts))

        components, residual = decompose_least_squares(f, bases)
        recovered, projected = project_orthonormal(parts[1], bases[1])

        assert residual <= 1e-10
        for part, component in zip(parts, components):
            assert np.allclose(part, component, atol=1e-10)
        assert np.allclose(recovered, weights[1], atol=1e-10)
        assert np.allclose(projected, parts[1], atol=1e-10)

        print("✓ Projections recover the eigenspace components")


@pytest.mark.unit
class TestTruncation:
    """Truncation control."""

    def test_default_ladder(self):
        """256 up to |a| = 0.6, 512 up to 0.8, 1024 above."""
        assert default_truncation(0.5) == 256
        assert default_truncation(0.7j) == 512
        assert default_truncation(0.9) == 1024

        print("✓ Default truncation ladder")

    def test_required_truncation_meets_tolerance(self):
        """The returned N keeps the tail of e_(n_max) below the tolerance."""
        N = required_truncation(0.5, 60)
        rows = guyker_basis(0.5, 61, 2 * N).matrix

        assert N >= settings.truncation_start_n
        assert np.sum(np.abs(rows[60, N:]) ** 2) <= settings.truncation_tail_tolerance

        print(f"✓ e_60 at |a| = 0.5 needs N = {N}")

    def test_required_truncation_grows_with_modulus(self):
        """Larger |a| spreads the coefficients and needs a larger N."""
        assert required_truncation(0.9, 100) > required_truncation(0.5, 100)

        print("✓ Truncation grows with |a|")

    def test_cap(self, monkeypatch):
        """Passing the configured cap raises TruncationError."""
        monkeypatch.setattr(settings, "truncation_max_n", 256)

        with pytest.raises(TruncationError):
            required_truncation(0.9, 400)

        print("✓ TruncationError past truncation_max_n")
