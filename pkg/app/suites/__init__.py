"""Property and acceptance suites producing CheckReports."""

from typing import Dict, Optional, Type

from app.schemas.check_report import CheckReport

from .base_suite import BaseSuite
from .identity_suite import IdentitySuite
from .observation_suite import ObservationSuite
from .order2_suite import Order2Suite
from .order3_suite import Order3Suite

SUITES: Dict[str, Type[BaseSuite]] = {
    "observations": ObservationSuite,
    "identities": IdentitySuite,
    "order2": Order2Suite,
    "order3": Order3Suite,
}


def run_suite(
    name: str,
    a: complex,
    trials: Optional[int] = None,
    seed: Optional[int] = None,
    k: int = 1,
) -> CheckReport:
    """Run one suite by name, or every suite for "all"."""
    if name == "all":
        reports = [cls().run(a=a, trials=trials, seed=seed, k=k) for cls in SUITES.values()]
        return CheckReport.merge("all", reports)
    if name not in SUITES:
        raise KeyError(f"Unknown suite '{name}'; expected one of {sorted([*SUITES, 'all'])}")
    return SUITES[name]().run(a=a, trials=trials, seed=seed, k=k)


__all__ = [
    "BaseSuite",
    "IdentitySuite",
    "ObservationSuite",
    "Order2Suite",
    "Order3Suite",
    "SUITES",
    "run_suite",
]
