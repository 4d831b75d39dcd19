"""
Integration tests for the check suites at the worked fixed point a = 0.5.
"""
import pytest

from app.core.exceptions import DomainError
from app.suites import SUITES, IdentitySuite, ObservationSuite, Order2Suite, Order3Suite, run_suite
from app.suites.observation_suite import SUPPORT_ANGLES, SUPPORT_TRIALS

TRIALS = 300
SEED = 11


def _assert_passed(report):
    failed = [(r.name, r.worst_value, r.bound) for r in report.failed_records]
    assert report.passed, failed


@pytest.mark.integration
class TestSuitesAtHalf:
    """Every suite passes at a = 0.5 with a short seeded run."""

    @pytest.mark.parametrize("k", [1, 2])
    def test_observations(self, k):
        """Correlation bounds, extremal family and support values."""
        report = ObservationSuite().run(a=0.5, trials=TRIALS, seed=SEED, k=k)

        _assert_passed(report)
        assert report.trials == TRIALS and report.seed == SEED
        assert report.epsilon_trunc <= 1e-9
        assert report.worst_value < 0.4

        print(f"✓ observations k={k}: worst delta1 = {report.worst_value:.6f}")

    def test_lambda_prime_checked_at_every_angle(self):
        """Sampled Lambda' stays below Lambda_0 on the whole angle grid."""
        report = ObservationSuite().run(a=0.5, trials=TRIALS, seed=SEED)
        expected = SUPPORT_ANGLES * min(SUPPORT_TRIALS, TRIALS)

        for name in ("lambda_prime_below_lambda0", "support_below_lambda_prime"):
            record = next(r for r in report.records if r.name == name)
            assert record.passed
            assert record.samples == expected

        print(f"✓ Lambda' compared on {expected} (angle, sample) pairs")

    def test_identities(self):
        """Quadratic-form and norm expansions hold to rounding."""
        report = IdentitySuite().run(a=0.5, trials=TRIALS, seed=SEED)

        _assert_passed(report)
        gap = next(r for r in report.records if r.name == "single_factor_gap")
        assert gap.bound is None

        print(f"✓ identities: single-factor gap up to {gap.worst_value:.3e}")

    def test_order2(self):
        """Every sample stays strictly inside the ellipse."""
        report = Order2Suite().run(a=0.5, trials=TRIALS, seed=SEED)

        _assert_passed(report)
        assert report.worst_value < 5.0 / 3.0
        assert report.bound == pytest.approx(5.0 / 3.0)

        print(f"✓ order2: worst s = {report.worst_value:.6f}")

    def test_order3(self):
        """Closed form, curve structure and determinant identity."""
        report = Order3Suite().run(a=0.5, trials=TRIALS, seed=SEED)

        _assert_passed(report)
        assert report.parameters["L"] == pytest.approx(2.063476, abs=1e-6)
        assert report.parameters["Delta"] == pytest.approx(0.4)

        print(f"✓ order3: {len(report.records)} records")

    def test_seed_reproducible(self):
        """Same seed, same worst values."""
        first = ObservationSuite().run(a=0.5, trials=100, seed=SEED)
        second = ObservationSuite().run(a=0.5, trials=100, seed=SEED)

        assert [r.worst_value for r in first.records] == [r.worst_value for r in second.records]

        print("✓ Seeded runs are reproducible")


@pytest.mark.integration
class TestRunSuite:
    """Dispatch by name."""

    def test_all(self):
        """"all" merges every suite with prefixed record names."""
        report = run_suite("all", 0.5, trials=100, seed=SEED)

        _assert_passed(report)
        prefixes = {r.name.split(".", 1)[0] for r in report.records}
        assert prefixes == set(SUITES)

        print(f"✓ all: {len(report.records)} records")

    def test_unknown(self):
        """Unknown names raise KeyError."""
        with pytest.raises(KeyError):
            run_suite("nope", 0.5)

        print("✓ Unknown suite rejected")

    @pytest.mark.parametrize("a", [0.0, 1.0, 0.6 + 0.8j])
    def test_invalid_fixed_point(self, a):
        """The suites need 0 < |a| < 1."""
        with pytest.raises(DomainError):
            run_suite("order2", a, trials=10)

        print(f"✓ a={a} rejected")

    def test_health(self):
        """Run metrics are tracked per suite instance."""
        suite = Order2Suite()
        suite.run(a=0.5, trials=50, seed=SEED)
        health = suite.health_check()

        assert health["total_runs"] == 1
        assert health["status"] == "healthy"
        assert health["last_passed"] is True

        print(f"✓ {suite!r} healthy")


@pytest.mark.integration
@pytest.mark.slow
class TestSuitesNearBoundary:
    """|a| = 0.9 needs longer truncations."""

    @pytest.mark.parametrize("name", ["observations", "order2", "order3"])
    def test_point_nine(self, name):
        """Suites still pass close to the circle."""
        report = run_suite(name, 0.9j, trials=TRIALS, seed=SEED)

        _assert_passed(report)

        print(f"✓ {name} at a = 0.9i")
