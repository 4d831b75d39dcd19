"""
Unit tests for the support-function sweep and boundary geometry.
"""
import math

import numpy as np
import pytest

from app.core.exceptions import DomainError
from app.models.numrange import BoundaryPolyline, SupportSample
from app.services.hardy_operator import composition_matrix
from app.services.numrange_numeric import (
    angle_grid,
    hausdorff,
    hermitian_part,
    hull_from_support,
    is_convex,
    polyline_from_points,
    support_function,
    support_point_residual,
    support_values,
    symmetry_defect,
    top_eigenpair,
)
from app.services.order2_model import ellipse_params, ellipse_support
from config import settings

SQUARE = np.array([1.0, 1j, -1.0, -1j])


def _random_hermitian(rng, n):
    X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (X + X.conj().T)


@pytest.mark.unit
class TestHermitianPart:
    """H(alpha) = Re(exp(-i alpha) T)."""

    def test_angle_grid(self):
        """Four angles are the quarter turns."""
        assert np.allclose(angle_grid(4), [0.0, math.pi / 2, math.pi, 3 * math.pi / 2])
        with pytest.raises(DomainError):
            angle_grid(0)

        print("✓ Uniform angle grid")

    def test_diagonal(self):
        """diag(1, i) -> diag(1, 0) at 0 and diag(0, 1) at pi/2."""
        T = np.diag([1.0, 1j])

        assert np.allclose(hermitian_part(T, 0.0), np.diag([1.0, 0.0]))
        assert np.allclose(hermitian_part(T, math.pi / 2), np.diag([0.0, 1.0]), atol=1e-15)

        print("✓ Hermitian parts of diag(1, i)")

    def test_is_hermitian(self, order3_matrix):
        """The result equals its conjugate transpose."""
        H = hermitian_part(order3_matrix, 0.7)

        assert np.array_equal(H, H.conj().T)

        print("✓ H(alpha) is Hermitian")


@pytest.mark.unit
class TestTopEigenpair:
    """Largest eigenvalue and a phase-fixed eigenvector."""

    def test_diagonal(self):
        """diag(3, 1, 2) has top pair (3, e_0)."""
        lam, v = top_eigenpair(np.diag([3.0, 1.0, 2.0]))

        assert abs(lam - 3.0) < 1e-14
        assert np.allclose(v, [1.0, 0.0, 0.0])

        print("✓ Diagonal top eigenpair")

    def test_swap(self):
        """[[0, 1], [1, 0]] has top pair (1, (1, 1)/sqrt 2)."""
        lam, v = top_eigenpair(np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex))

        assert abs(lam - 1.0) < 1e-14
        assert np.allclose(v, np.array([1.0, 1.0]) / math.sqrt(2.0))

        print("✓ 2x2 swap matrix")

    def test_random_matches_eigvalsh(self, rng):
        """The dense path agrees with numpy's full spectrum."""
        H = _random_hermitian(rng, 40)
        lam, v = top_eigenpair(H)

        assert abs(lam - np.linalg.eigvalsh(H)[-1]) <= 1e-10
        assert abs(np.linalg.norm(v) - 1.0) <= 1e-12
        pivot = v[np.argmax(np.abs(v))]
        assert abs(pivot.imag) <= 1e-15 and pivot.real > 0

        print("✓ Dense top eigenpair matches eigvalsh")

    def test_lanczos_path(self, rng, monkeypatch):
        """Above dense_eigen_max_n the Lanczos solver returns the same value."""
        H = _random_hermitian(rng, 60)
        monkeypatch.setattr(settings, "dense_eigen_max_n", 8)

        lam, v = top_eigenpair(H, tol=1e-10)

        assert abs(lam - np.linalg.eigvalsh(H)[-1]) <= 1e-8
        assert np.linalg.norm(H @ v - lam * v) <= 1e-6

        print("✓ Lanczos path matches eigvalsh")


@pytest.mark.unit
class TestSupportSweep:
    """Support values, boundary points and hull reconstruction."""

    def test_square(self):
        """diag(1, i, -1, -i) at pi/4 + k pi/2 rebuilds the square."""
        angles = math.pi / 4 + math.pi / 2 * np.arange(4)
        samples = support_function(np.diag(SQUARE), angles, threads=1)
        hull = hull_from_support(samples)

        assert np.allclose(support_values(samples), math.sqrt(0.5))
        assert support_point_residual(samples) <= 1e-12
        assert np.allclose(hull.points, [1j, -1.0, -1j, 1.0], atol=1e-12)
        assert hull.closed

        print("✓ Square recovered from four support lines")

    def test_nilpotent_disk(self):
        """[[0, 1], [0, 0]] has W = disk of radius 1/2."""
        n = 16
        samples = support_function(np.array([[0.0, 1.0], [0.0, 0.0]]), angle_grid(n), threads=1)
        hull = hull_from_support(samples)

        assert np.allclose(support_values(samples), 0.5, atol=1e-14)
        assert np.allclose(np.abs(hull.points), 0.5 / math.cos(math.pi / n), atol=1e-12)
        assert is_convex(hull)

        print("✓ Nilpotent 2x2 gives the disk of radius 1/2")

    def test_samples_sorted(self):
        """Angles are returned in increasing order."""
        samples = support_function(np.diag(SQUARE), [2.0, 0.5, 1.0], threads=1)

        assert [s.alpha for s in samples] == [0.5, 1.0, 2.0]
        with pytest.raises(DomainError):
            support_function(np.diag(SQUARE), [])

        print("✓ Samples sorted by angle")

    def test_thread_count_does_not_change_results(self, order3_matrix):
        """One worker and four workers produce the same sweep."""
        angles = angle_grid(24)
        serial = support_function(order3_matrix, angles, threads=1)
        parallel = support_function(order3_matrix, angles, threads=4)

        assert np.allclose(support_values(serial), support_values(parallel), atol=1e-13)
        assert np.allclose([s.point for s in serial], [s.point for s in parallel], atol=1e-10)

        print("✓ Sweep independent of thread count")

    def test_order2_support_below_ellipse(self, order2_symbol, order2_matrix):
        """Compressions sit inside the ellipse and grow with N."""
        angles = angle_grid(24)
        model = ellipse_params(order2_symbol.a)
        small = support_values(support_function(composition_matrix(order2_symbol, 128), angles, threads=1))
        large = support_values(support_function(order2_matrix, angles, threads=1))

        assert np.all(large <= ellipse_support(model, angles) + 1e-10)
        assert np.all(small <= large + 1e-10)

        print(f"✓ Largest support gap {np.max(ellipse_support(model, angles) - large):.3e}")

    def test_support_point_residual(self, order2_matrix):
        """Boundary points lie on their support lines."""
        samples = support_function(order2_matrix, angle_grid(12), threads=1)

        assert support_point_residual(samples) <= 1e-9

        print("✓ Boundary points on their support lines")


@pytest.mark.unit
class TestHullErrors:
    """Invalid angle sets for hull reconstruction."""

    @staticmethod
    def _samples(angles):
        return [SupportSample(alpha=a, lam=1.0, point=complex(math.cos(a), math.sin(a))) for a in angles]

    def test_too_few(self):
        """Two samples cannot bound a polygon."""
        with pytest.raises(DomainError):
            hull_from_support(self._samples([0.0, 1.0]))

        print("✓ Fewer than three samples rejected")

    def test_parallel_lines(self):
        """Consecutive angles closer than the threshold are rejected."""
        with pytest.raises(DomainError):
            hull_from_support(self._samples([0.0, 1e-8, math.pi / 2, math.pi, 3 * math.pi / 2]))

        print("✓ Nearly parallel support lines rejected")

    def test_unbounded(self):
        """A gap of pi or more leaves the hull open."""
        with pytest.raises(DomainError):
            hull_from_support(self._samples([0.0, 0.1, 0.2]))

        print("✓ Angle gap >= pi rejected")


@pytest.mark.unit
class TestGeometry:
    """Hausdorff distance, symmetry defect and convexity."""

    def test_hausdorff_zero(self):
        """A polyline has distance 0 from itself."""
        square = polyline_from_points(SQUARE)

        assert hausdorff(square, square) == 0.0

        print("✓ d_H(A, A) = 0")

    def test_hausdorff_shift(self):
        """Shifting the square by eps along the real axis moves it by eps."""
        eps = 1e-3
        square = polyline_from_points(SQUARE)
        shifted = polyline_from_points(SQUARE + eps)

        assert abs(hausdorff(square, shifted) - eps) <= 1e-12
        assert abs(hausdorff(square, shifted) - hausdorff(shifted, square)) <= 1e-15

        print("✓ Hausdorff distance of a shifted square")

    def test_open_polyline(self):
        """Open polylines have one segment fewer."""
        starts, ends = BoundaryPolyline(points=SQUARE, closed=False).segments()

        assert starts.size == 3 and ends.size == 3

        print("✓ Open polyline segments")

    def test_symmetry_defect_rotation(self, rotation3_symbol):
        """The rotation's range is invariant under rotation by 2 pi/3."""
        T = composition_matrix(rotation3_symbol, 16)
        samples = support_function(T, angle_grid(12), threads=1)

        assert symmetry_defect(samples, 3) <= 1e-12

        print("✓ Rotation symbol has zero symmetry defect")

    def test_symmetry_defect_detects_asymmetry(self):
        """diag(1, 0) is not symmetric under a half turn."""
        samples = support_function(np.diag([1.0, 0.0]), angle_grid(8), threads=1)

        assert abs(symmetry_defect(samples, 2) - 1.0) <= 1e-12

        print("✓ Half-turn defect of diag(1, 0) is 1")

    def test_grid_not_closed(self):
        """The grid must contain every shifted angle."""
        samples = support_function(np.diag(SQUARE), angle_grid(10), threads=1)

        with pytest.raises(DomainError):
            symmetry_defect(samples, 3)
        with pytest.raises(DomainError):
            symmetry_defect(samples, 0)

        print("✓ Grid not closed under the rotation rejected")

    def test_convexity(self):
        """A square is convex; an arrowhead is not."""
        arrow = polyline_from_points([0.0, 2.0, 2.0 + 2.0j, 1.0 + 0.5j, 2.0j])

        assert is_convex(polyline_from_points(SQUARE))
        assert is_convex(polyline_from_points(SQUARE[::-1]))
        assert not is_convex(arrow)

        print("✓ Convexity test")
