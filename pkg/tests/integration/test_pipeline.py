"""
Integration tests for the comparison pipeline.
"""
import pytest

from app.core.exceptions import DomainError
from app.services.disk_maps import elliptic_symbol
from app.services.pipeline.comparison_pipeline import (
    COMPLETED,
    EXACT_SYMMETRY_TOLERANCE,
    MAX_SYMMETRY_TOLERANCE,
    SKIPPED,
    TRUNCATED_SYMMETRY_TOLERANCE,
    ComparisonPipeline,
    symmetry_tolerance,
    truncation_ladder,
)


@pytest.mark.unit
class TestLadder:
    """Truncation ladder and tolerance policy."""

    @pytest.mark.parametrize("N,expected", [(512, [128, 256, 512]), (4, [2, 4]), (2, [2]), (10, [2, 5, 10])])
    def test_ladder(self, N, expected):
        """N/4, N/2, N without rungs below 2."""
        assert truncation_ladder(N) == expected

        print(f"✓ ladder({N}) = {expected}")

    def test_symmetry_tolerance(self, order2_symbol, order3_symbol, rotation3_symbol):
        """Exact cases get 1e-8; truncated ones shrink like N^-3 from 1e-4 at the default size."""
        assert symmetry_tolerance(rotation3_symbol, 64, "monomial") == EXACT_SYMMETRY_TOLERANCE
        assert symmetry_tolerance(order2_symbol, 64, "guyker") == EXACT_SYMMETRY_TOLERANCE
        assert symmetry_tolerance(order3_symbol, 256, "monomial") == pytest.approx(TRUNCATED_SYMMETRY_TOLERANCE)
        assert symmetry_tolerance(order3_symbol, 512, "monomial") == pytest.approx(1.25e-5)
        assert symmetry_tolerance(order2_symbol, 128, "monomial") == pytest.approx(8e-4)
        assert symmetry_tolerance(order2_symbol, 63, "guyker") > EXACT_SYMMETRY_TOLERANCE
        assert symmetry_tolerance(order3_symbol, 16, "guyker") == MAX_SYMMETRY_TOLERANCE

        print("✓ Symmetry tolerance policy")

    def test_tolerance_follows_modulus(self):
        """Near the circle the default truncation, and so the reference size, grows."""
        near = elliptic_symbol(0.9, 3)

        assert symmetry_tolerance(near, 1024, "monomial") == pytest.approx(TRUNCATED_SYMMETRY_TOLERANCE)
        assert symmetry_tolerance(near, 512, "monomial") == pytest.approx(8 * TRUNCATED_SYMMETRY_TOLERANCE)

        print("✓ Tolerance scales with the default truncation")


@pytest.mark.integration
class TestComparisonPipeline:
    """Stages for orders 2, 3 and 4 and for rotations."""

    def test_order2(self, order2_symbol):
        """Nested below the ellipse and symmetric under z -> -z."""
        result = ComparisonPipeline().run(order2_symbol, 64, 32)
        report = result["report"]

        assert report.upper_bound_ok and report.monotonicity_ok
        assert set(report.stages.values()) == {COMPLETED}
        assert report.sup_support_gap >= -1e-9
        assert report.symmetry_defect <= report.symmetry_tolerance
        assert result["stages"]["hull"]["convex"]
        assert len(result["samples"]) == 32 and len(result["closed_form"]) == 32

        print(f"✓ order 2: hausdorff={report.hausdorff:.3e}")

    def test_order2_guyker_exact_symmetry(self, order2_symbol):
        """Even Guyker sections are exactly symmetric."""
        report = ComparisonPipeline(basis="guyker").run(order2_symbol, 32, 16)["report"]

        assert report.symmetry_tolerance == EXACT_SYMMETRY_TOLERANCE
        assert report.symmetry_defect <= EXACT_SYMMETRY_TOLERANCE

        print(f"✓ Guyker section defect {report.symmetry_defect:.2e}")

    def test_order3(self, order3_symbol):
        """The sweep never exceeds the envelope."""
        report = ComparisonPipeline(threads=2).run(order3_symbol, 256, 48)["report"]

        assert report.upper_bound_ok and report.monotonicity_ok
        assert report.hausdorff is not None and report.hausdorff < 0.08

        print(f"✓ order 3: hausdorff={report.hausdorff:.3e}")

    def test_rotation(self, rotation3_symbol):
        """No closed form for rotations; the sweep is exactly symmetric."""
        result = ComparisonPipeline().run(rotation3_symbol, 32, 12)
        report = result["report"]

        assert report.stages["closed_form"] == SKIPPED
        assert report.stages["hausdorff"] == SKIPPED
        assert report.hausdorff is None and report.upper_bound_ok is None
        assert report.symmetry_defect <= EXACT_SYMMETRY_TOLERANCE

        print("✓ Rotation symbol")

    def test_order4(self):
        """Order 4 reports only the sweep and the symmetry defect."""
        sym = elliptic_symbol(0.5, 4)
        report = ComparisonPipeline().run(sym, 256, 32)["report"]

        assert report.stages["closed_form"] == SKIPPED
        assert report.stages["symmetry"] == COMPLETED
        assert report.symmetry_tolerance == pytest.approx(TRUNCATED_SYMMETRY_TOLERANCE)
        assert report.symmetry_defect <= report.symmetry_tolerance

        print(f"✓ order 4: defect={report.symmetry_defect:.2e}")

    def test_symmetry_skipped_off_grid(self, order3_symbol):
        """An angle count that is not a multiple of p skips the symmetry stage."""
        report = ComparisonPipeline().run(order3_symbol, 16, 10)["report"]

        assert report.stages["symmetry"] == SKIPPED
        assert report.symmetry_defect == 0.0

        print("✓ Symmetry stage skipped")

    def test_small_N(self, order2_symbol):
        """N < 2 is rejected."""
        with pytest.raises(DomainError):
            ComparisonPipeline().run(order2_symbol, 1, 8)

        print("✓ N=1 rejected")
