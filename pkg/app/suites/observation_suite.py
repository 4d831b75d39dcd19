"""
Correlation bounds between the three eigenspaces of an order-3 adjoint.
"""
import math
import time
from typing import List, Optional

import numpy as np

from app.core.exceptions import DomainError
from app.schemas.check_report import CheckReport, TestRecord
from app.services.disk_maps import elliptic_symbol
from app.services.order3_model import effective_alpha, geometry_of, lambda0, lambda_prime
from app.services.spectral_bounds import (
    CorrelationBounds,
    EigenspaceSampler,
    correlation_triple,
    extremal_closed_form,
    extremal_family,
)
from config import settings

from .base_suite import BaseSuite

# Trials and angles used for the support comparison against Lambda'.
SUPPORT_TRIALS = 128
SUPPORT_ANGLES = 8

# A triple with every delta above Delta - this margin counts as reaching (Delta, Delta, Delta).
CORNER_MARGIN = 1e-6

EXTREMAL_CASES = (
    ((0.0, 0.0, 0.0), 0.5),
    ((math.pi, math.pi, math.pi), 0.5),
    ((0.3, -1.1, 2.0), 0.9),
)


class ObservationSuite(BaseSuite):
    """
    Random and extremal eigenspace samples against the correlation bounds.

    Checks delta_1, delta_2 <= Delta, delta_3 <= |a|/sqrt(1+|a|^2),
    delta_2^2 + delta_3^2 < 2 Delta^2, delta_1 <= 1/2,
    delta_2^2 + delta_3^2 < 1/2, that no sample reaches (Delta, Delta, Delta),
    and that every sampled support value stays below Lambda'.
    """

    def __init__(self, **kwargs):
        super().__init__(suite_name="observations", **kwargs)

    def run(
        self,
        a: complex = 0.5,
        trials: Optional[int] = None,
        seed: Optional[int] = None,
        k: int = 1,
        **kwargs,
    ) -> CheckReport:
        start_time = time.time()
        trials = settings.default_trials if trials is None else trials
        seed = settings.default_seed if seed is None else seed
        if not self.validate_input(a):
            raise DomainError(f"Observation suite needs 0 < |a| < 1, got |a|={abs(complex(a))}")

        sym = elliptic_symbol(a, 3, k)
        sampler = EigenspaceSampler(sym)
        bounds = CorrelationBounds.for_fixed_point(a)
        eps = sampler.epsilon_trunc
        tol = self.tolerance + eps

        rngs = self.batch_rngs(seed)
        batches = [sampler.draw(rng, size) for rng, size in zip(rngs, self.batch_sizes(trials, len(rngs))) if size]
        coeffs = [np.vstack([b[r] for b in batches]) for r in range(3)]
        delta, theta, norms = sampler.correlations(coeffs)

        def offending(t: int):
            return {"trial": t, "seed": seed, "delta": delta[t].tolist(), "theta": theta[t].tolist()}

        pair_sum = delta[:, 1] ** 2 + delta[:, 2] ** 2
        records: List[TestRecord] = [
            self.record_max("delta1_below_Delta", delta[:, 0], bounds.delta + tol, offending=offending),
            self.record_max("delta2_below_Delta", delta[:, 1], bounds.delta + tol, offending=offending),
            self.record_max("delta3_below_bound", delta[:, 2], bounds.delta3 + tol, offending=offending),
            self.record_max("delta23_pair_sum", pair_sum, bounds.pair_sum + tol, strict=True, offending=offending),
            self.record_max("delta1_below_half", delta[:, 0], 0.5 + tol, offending=offending),
            self.record_max("delta23_pair_sum_below_half", pair_sum, 0.5, strict=True, offending=offending),
            self.record_max(
                "no_sample_reaches_corner",
                np.min(delta, axis=1),
                bounds.delta - CORNER_MARGIN,
                strict=True,
                offending=offending,
            ),
        ]

        records.append(self._fast_path_record(sampler, coeffs, delta))
        records.extend(self._extremal_records(a, bounds))
        records.extend(self._support_records(sym, sampler, coeffs, delta, norms, tol))

        report = CheckReport.from_records(
            self.suite_name,
            records,
            trials=trials,
            seed=seed,
            worst_value=float(np.max(delta[:, 0])),
            bound=bounds.delta,
            epsilon_trunc=eps,
            parameters={"a": [complex(a).real, complex(a).imag], "k": k, "m": sampler.m, "N": sampler.N},
        )
        return self._finish(report, start_time)

    def _fast_path_record(self, sampler: EigenspaceSampler, coeffs, delta: np.ndarray) -> TestRecord:
        """Gram-matrix correlations agree with materialized vectors."""
        worst = 0.0
        for t in range(min(4, coeffs[0].shape[0])):
            f1, f2, f3 = sampler.components(coeffs, t)
            direct = correlation_triple(f1, f2, f3, provenance="sampler")
            worst = max(worst, float(np.max(np.abs(np.array(direct.delta) - delta[t]))))
        return TestRecord(name="gram_path_matches_direct", passed=worst <= 1e-10, worst_value=worst, bound=1e-10, samples=4)

    def _extremal_records(self, a: complex, bounds: CorrelationBounds) -> List[TestRecord]:
        worst = 0.0
        worst_gap = math.inf
        for theta, rho in EXTREMAL_CASES:
            family = extremal_family(theta, rho, a)
            triple = correlation_triple(*family, provenance=f"extremal rho={rho}")
            observed = [triple.delta[k] * np.exp(1j * triple.theta[k]) for k in range(3)]
            expected = extremal_closed_form(theta, rho, a)
            worst = max(worst, max(abs(o - e) for o, e in zip(observed, expected)))
            worst_gap = min(worst_gap, bounds.delta - triple.delta[2])
        return [
            TestRecord(
                name="extremal_matches_closed_form",
                passed=worst <= 1e-8,
                worst_value=worst,
                bound=1e-8,
                samples=len(EXTREMAL_CASES),
            ),
            TestRecord(
                name="extremal_delta3_stays_below_Delta",
                passed=worst_gap > 0.0,
                worst_value=float(bounds.delta - worst_gap),
                bound=bounds.delta,
                samples=len(EXTREMAL_CASES),
            ),
        ]

    def _support_records(self, sym, sampler: EigenspaceSampler, coeffs, delta, norms, tol) -> List[TestRecord]:
        """
        Re(exp(-i alpha) <T* f, f>)/|f|^2 <= Lambda'(alpha, delta), and
        Lambda'(alpha, delta) <= Lambda_0(alpha), both at every angle.
        """
        geo = geometry_of(sym.a)
        count = min(SUPPORT_TRIALS, coeffs[0].shape[0])
        subset = [c[:count] for c in coeffs]
        q, total = sampler.quadratic_forms(subset)
        angles = 2.0 * np.pi * (np.arange(SUPPORT_ANGLES) + 0.25) / SUPPORT_ANGLES

        below_prime = []
        below_zero = []
        for alpha in angles:
            alpha_eff = effective_alpha(sym, alpha)
            support_0 = lambda0(alpha_eff, geo)
            for t in range(count):
                prime = lambda_prime(alpha_eff, delta[t], geo)
                value = (np.exp(-1j * alpha) * q[t]).real / total[t]
                below_prime.append(value - prime)
                below_zero.append(prime - support_0)

        return [
            self.record_max("support_below_lambda_prime", np.array(below_prime), tol),
            self.record_max("lambda_prime_below_lambda0", np.array(below_zero), tol),
        ]
