"""
Closed-form checks for order-3 symbols: the support function, its envelope,
the tangential cubic and the boundary sextic.
"""
import math
import time
from typing import List, Optional

import numpy as np

from app.core.exceptions import DomainError
from app.schemas.check_report import CheckReport, TestRecord
from app.services.numrange_numeric import angle_grid
from app.services.order3_model import (
    TWO_PI_3,
    chebyshev_zeta,
    cusp_points,
    detM_identity,
    dual_cubic_singularity_check,
    envelope_point,
    factorization_check,
    foci_check,
    geometry_from_L,
    geometry_of,
    inflexional_tangent_check,
    lambda0,
    lambda_prime,
    normalized_sextic,
    on_curve_point,
    sextic_coeffs,
    sextic_eval,
    singularity_report,
    support_line_residual,
    x_axis_roots,
)
from config import settings

from .base_suite import BaseSuite

# Moduli at which Lambda_0 and Lambda'_0 are compared, besides the requested one.
REFERENCE_MODULI = (0.3, 0.5, 0.7)

AGREEMENT_TOLERANCE = 1e-9
INCIDENCE_TOLERANCE = 1e-10
ENVELOPE_TOLERANCE = 1e-8
DETERMINANT_TOLERANCE = 1e-10

# Random draws for the determinant identity and the monotonicity check.
MAX_DRAWS = 1000


class Order3Suite(BaseSuite):
    """Lambda_0 against Lambda'_0, the dual cubic, the sextic and the determinant identity."""

    def __init__(self, **kwargs):
        super().__init__(suite_name="order3", **kwargs)

    def run(
        self,
        a: complex = 0.5,
        trials: Optional[int] = None,
        seed: Optional[int] = None,
        angles: Optional[int] = None,
        **kwargs,
    ) -> CheckReport:
        start_time = time.time()
        trials = settings.default_trials if trials is None else trials
        seed = settings.default_seed if seed is None else seed
        angles = settings.default_angles if angles is None else angles
        if not self.validate_input(a):
            raise DomainError(f"Order-3 suite needs 0 < |a| < 1, got |a|={abs(complex(a))}")

        geo = geometry_of(a)
        grid = angle_grid(angles)
        draws = min(trials, MAX_DRAWS)
        rng_det, rng_mono, rng_sym = self.batch_rngs(seed, 3)

        records: List[TestRecord] = [
            self._agreement_record(a, grid),
            self._periodicity_record(geo, grid),
            self.record_max(
                "support_lines_on_dual_cubic",
                [support_line_residual(alpha, geo) for alpha in grid],
                INCIDENCE_TOLERANCE,
            ),
        ]

        curve = sextic_coeffs(geo.L)
        envelope = np.array([envelope_point(alpha, geo) for alpha in grid])
        records.append(
            self.record_max(
                "envelope_on_sextic",
                normalized_sextic(envelope[:, 0], envelope[:, 1], curve),
                ENVELOPE_TOLERANCE,
            )
        )
        records.extend(self._curve_records(curve, geo.L))
        records.append(self._symmetry_record(curve, rng_sym, draws))
        records.append(self._determinant_record(rng_det, draws))
        records.append(self._monotonicity_record(geo, rng_mono, draws))
        records.append(self._inversion_record(geo))

        report = CheckReport.from_records(
            self.suite_name,
            records,
            trials=draws,
            seed=seed,
            worst_value=records[0].worst_value,
            bound=AGREEMENT_TOLERANCE,
            parameters={"a": [complex(a).real, complex(a).imag], "angles": angles, "L": geo.L, "Delta": geo.delta},
        )
        return self._finish(report, start_time)

    def _agreement_record(self, a: complex, grid: np.ndarray) -> TestRecord:
        """Lambda_0(alpha) = Lambda'(alpha, (Delta, Delta, Delta))."""
        moduli = sorted({*REFERENCE_MODULI, abs(complex(a))})
        gaps = []
        for modulus in moduli:
            geo = geometry_of(modulus)
            delta = (geo.delta,) * 3
            gaps.extend(abs(lambda0(alpha, geo) - lambda_prime(alpha, delta, geo)) for alpha in grid)
        record = self.record_max("lambda0_equals_lambda_prime", gaps, AGREEMENT_TOLERANCE)
        return record.model_copy(update={"detail": f"moduli={moduli}"})

    def _periodicity_record(self, geo, grid: np.ndarray) -> TestRecord:
        gaps = [abs(lambda0(alpha, geo) - lambda0(alpha + TWO_PI_3, geo)) for alpha in grid]
        return self.record_max("lambda0_period_2pi_over_3", gaps, settings.strict_equality_tolerance)

    def _curve_records(self, curve, L: float) -> List[TestRecord]:
        strict = settings.strict_equality_tolerance
        factor = factorization_check(curve)
        x, y = on_curve_point(L)
        on_curve = float(normalized_sextic(x, y, curve))
        singular = singularity_report(curve)
        foci = foci_check(L)
        roots = x_axis_roots(curve)
        dual = dual_cubic_singularity_check(L)
        inflexion = inflexional_tangent_check(L)
        return [
            TestRecord(name="x_axis_factorization", passed=factor <= strict, worst_value=factor, bound=strict, samples=7),
            TestRecord(name="on_curve_point", passed=on_curve <= strict, worst_value=on_curve, bound=strict, samples=1),
            TestRecord(
                name="cusp_gradients",
                passed=bool(singular["passed"]),
                worst_value=singular["max_cusp_gradient"],
                bound=1e-8,
                samples=len(cusp_points(L)),
                detail=f"{singular['real_cusps_detected']} real cusps",
            ),
            TestRecord(
                name="foci_on_dual_cubic",
                passed=bool(foci["passed"]),
                worst_value=foci["max_value"],
                bound=strict,
                samples=len(foci["values"]),
            ),
            TestRecord(
                name="x_axis_root_count",
                passed=len(roots) == 4,
                worst_value=float(len(roots)),
                bound=4.0,
                samples=1,
                detail=", ".join(f"{r:.12g}" for r in roots),
            ),
            TestRecord(
                name="dual_cubic_nonsingular",
                passed=not dual["singular"],
                worst_value=dual["min_gradient_norm"],
                bound=strict,
                samples=len(dual["candidates"]),
            ),
            TestRecord(
                name="inflexional_tangent",
                passed=inflexion["max_residual"] <= strict,
                worst_value=inflexion["max_residual"],
                bound=strict,
                samples=inflexion["samples"],
            ),
        ]

    def _symmetry_record(self, curve, rng: np.random.Generator, draws: int) -> TestRecord:
        """Gamma is invariant under rotation by 2 pi/3 and under y -> -y."""
        x = rng.uniform(-2.0, 2.0, draws)
        y = rng.uniform(-2.0, 2.0, draws)
        z = (x + 1j * y) * np.exp(1j * TWO_PI_3)
        scale = curve.max_abs_coefficient * np.maximum(1.0, np.hypot(x, y)) ** 6
        value = sextic_eval(x, y, curve)
        rotated = sextic_eval(z.real, z.imag, curve)
        mirrored = sextic_eval(x, -y, curve)
        gaps = np.maximum(np.abs(rotated - value), np.abs(mirrored - value)) / scale
        return self.record_max("sextic_symmetry", gaps, settings.strict_equality_tolerance)

    def _determinant_record(self, rng: np.random.Generator, draws: int) -> TestRecord:
        """det M at the stationary angles against the closed-form determinant."""
        gaps = []
        for _ in range(draws):
            lam = rng.uniform(1.0, 3.0)
            zeta = chebyshev_zeta(rng.uniform(0.0, 2.0 * math.pi))
            delta = rng.uniform(0.0, 0.5, 3)
            numeric, closed = detM_identity(lam, zeta, delta)
            gaps.append(abs(numeric - closed) / max(1.0, lam ** 3))
        return self.record_max("determinant_identity", gaps, DETERMINANT_TOLERANCE)

    def _monotonicity_record(self, geo, rng: np.random.Generator, draws: int) -> TestRecord:
        """Lambda' grows strictly when the correlations grow."""
        gaps = []
        for _ in range(draws):
            alpha = rng.uniform(0.0, 2.0 * math.pi)
            low = rng.uniform(0.0, 0.4, 3)
            high = low + rng.uniform(0.01, 0.09, 3)
            gaps.append(lambda_prime(alpha, low, geo) - lambda_prime(alpha, high, geo))
        return self.record_max("lambda_prime_monotone", gaps, 0.0, strict=True)

    def _inversion_record(self, geo) -> TestRecord:
        """geometry_from_L recovers Delta from L."""
        recovered = geometry_from_L(geo.L)
        gap = abs(recovered.delta - geo.delta)
        return TestRecord(name="L_inversion", passed=gap <= AGREEMENT_TOLERANCE, worst_value=gap, bound=AGREEMENT_TOLERANCE, samples=1)
