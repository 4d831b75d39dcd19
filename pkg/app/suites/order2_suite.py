"""
Boundary exclusion for order-2 symbols.

Every unit f = f1 + f2 split over the (+1) and (-1) eigenspaces of the
adjoint gives q = <C* f, f> with (|1-q| + |1+q|)/2 strictly below the
semi-major axis (1+|a|^2)/(1-|a|^2).
"""
import time
from typing import List, Optional

import numpy as np

from app.core.exceptions import DomainError
from app.schemas.check_report import CheckReport, TestRecord
from app.services.disk_maps import elliptic_symbol
from app.services.hardy_operator import composition_matrix, default_truncation
from app.services.numrange_numeric import angle_grid, support_function, support_values
from app.services.order2_model import (
    correlation_ellipse_bound,
    ellipse_params,
    ellipse_support,
    pair_bound,
    pair_correlation,
    pair_family_correlation,
    pair_geometric_family,
)
from app.services.spectral_bounds import EigenspaceSampler
from config import settings

from .base_suite import BaseSuite

IDENTITY_TOLERANCE = 1e-7

# The geometric pair family must come this close to 2|a|/(1+|a|^2).
APPROACH_TOLERANCE = 1e-3
APPROACH_RHO = 0.99

SUPPORT_ANGLES = 72


class Order2Suite(BaseSuite):
    """Exclusion statistics, pair correlations and the support sweep for p = 2."""

    def __init__(self, **kwargs):
        super().__init__(suite_name="order2", **kwargs)

    def run(
        self,
        a: complex = 0.5,
        trials: Optional[int] = None,
        seed: Optional[int] = None,
        **kwargs,
    ) -> CheckReport:
        start_time = time.time()
        trials = settings.default_trials if trials is None else trials
        seed = settings.default_seed if seed is None else seed
        if not self.validate_input(a):
            raise DomainError(f"Order-2 suite needs 0 < |a| < 1, got |a|={abs(complex(a))}")

        sym = elliptic_symbol(a, 2)
        model = ellipse_params(a)
        sampler = EigenspaceSampler(sym)
        eps = sampler.epsilon_trunc
        tol = self.tolerance + eps

        rngs = self.batch_rngs(seed)
        batches = [sampler.draw(rng, size) for rng, size in zip(rngs, self.batch_sizes(trials, len(rngs))) if size]
        coeffs = [np.vstack([b[r] for b in batches]) for r in range(2)]

        delta, theta, norms = sampler.correlations(coeffs)
        delta = delta[:, 0]
        q, total = sampler.quadratic_forms(coeffs)
        q = q / total
        s = 0.5 * (np.abs(1.0 - q) + np.abs(1.0 + q))
        plus2 = norms[:, 0] ** 2 / total
        minus2 = norms[:, 1] ** 2 / total
        id21 = np.abs(0.25 * np.abs(1.0 - q) ** 2 - 0.25 * np.abs(1.0 + q) ** 2 - (minus2 - plus2))
        reachable = np.array([correlation_ellipse_bound(d) for d in delta])

        def offending(t: int):
            return {"trial": t, "seed": seed, "q": [float(q[t].real), float(q[t].imag)], "delta": float(delta[t])}

        records: List[TestRecord] = [
            self.record_max(
                "s_below_semi_major_axis",
                s,
                model.A - settings.strict_equality_tolerance,
                strict=True,
                offending=offending,
            ),
            self.record_max("identity_21", id21, IDENTITY_TOLERANCE, offending=offending),
            self.record_max("pair_correlation_below_bound", delta, pair_bound(a) + eps, strict=True, offending=offending),
            self.record_max("s_below_correlation_bound", s - reachable, tol, offending=offending),
        ]
        records.extend(self._pair_family_records(sym, a))
        records.append(self._support_record(sym, model, tol))

        report = CheckReport.from_records(
            self.suite_name,
            records,
            trials=trials,
            seed=seed,
            worst_value=float(np.max(s)),
            bound=model.A,
            epsilon_trunc=eps,
            parameters={"a": [complex(a).real, complex(a).imag], "m": sampler.m, "N": sampler.N},
        )
        return self._finish(report, start_time)

    def _pair_family_records(self, sym, a: complex) -> List[TestRecord]:
        bound = pair_bound(a)
        family = pair_geometric_family(a, 0.9)
        delta, _ = pair_correlation(sym, family.f1, family.f2)
        expected = pair_family_correlation(a, 0.9)
        approach = pair_family_correlation(a, APPROACH_RHO)
        return [
            TestRecord(
                name="pair_family_matches_closed_form",
                passed=abs(delta - expected) <= 1e-8,
                worst_value=abs(delta - expected),
                bound=1e-8,
                samples=1,
                detail=f"rho=0.9, J={family.J}, N={family.f1.N}",
            ),
            TestRecord(
                name="pair_family_approaches_bound",
                passed=0.0 <= bound - approach <= APPROACH_TOLERANCE,
                worst_value=approach,
                bound=bound,
                samples=1,
                detail=f"rho={APPROACH_RHO}",
            ),
        ]

    def _support_record(self, sym, model, tol: float) -> TestRecord:
        """Numeric support of the monomial compression stays inside the ellipse."""
        T = composition_matrix(sym, default_truncation(sym.a))
        angles = angle_grid(SUPPORT_ANGLES)
        lam = support_values(support_function(T, angles))
        closed = ellipse_support(model, np.asarray(angles))
        return self.record_max("numeric_support_below_ellipse", lam - closed, tol)
