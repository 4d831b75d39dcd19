"""
Base class for all property/acceptance check suites.
"""
import logging
import time
from abc import ABC, abstractmethod
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from app.schemas.check_report import CheckReport, TestRecord
from config import settings


logger = logging.getLogger(__name__)


class BaseSuite(ABC):
    """
    Abstract base class for check suites.

    Provides common functionality shared by every suite:
    - Input validation
    - Seeded trial batches
    - Run metrics and health reporting
    """

    def __init__(self, suite_name: str, tolerance: Optional[float] = None, **kwargs):
        """
        Initialize the suite.

        Args:
            suite_name: Name used in reports
            tolerance: Assertion tolerance, defaults to settings.assertion_tolerance
            **kwargs: Additional configuration parameters
        """
        self.suite_name = suite_name
        self.tolerance = settings.assertion_tolerance if tolerance is None else tolerance
        self.config = kwargs

        # Run tracking
        self.total_runs = 0
        self.failed_runs = 0
        self.average_processing_time = 0.0
        self.last_report: Optional[CheckReport] = None

        logger.info(f"Initialized suite: {self.suite_name}")

    @abstractmethod
    def run(self, **kwargs) -> CheckReport:
        """
        Execute the suite.

        Returns:
            Check report with one record per property
        """
        pass

    def validate_input(self, a: complex, require_nonzero: bool = True) -> bool:
        """
        Validate a fixed point before running.

        Args:
            a: Fixed point
            require_nonzero: Reject a = 0

        Returns:
            True if valid, False otherwise
        """
        modulus = abs(complex(a))
        if modulus >= 1.0:
            return False
        if require_nonzero and modulus == 0.0:
            return False
        return True

    def batch_rngs(self, seed: int, batches: Optional[int] = None) -> List[np.random.Generator]:
        """Independent generators for trial batches, derived from one root seed."""
        batches = batches or settings.trial_batches or 1
        return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(batches)]

    @staticmethod
    def batch_sizes(trials: int, batches: int) -> List[int]:
        base, extra = divmod(trials, batches)
        return [base + (1 if i < extra else 0) for i in range(batches)]

    def record_max(
        self,
        name: str,
        values: np.ndarray,
        bound: float,
        strict: bool = False,
        offending: Optional[Callable[[int], Dict[str, Any]]] = None,
    ) -> TestRecord:
        """
        Record "max(values) <= bound" (or "<" when strict).

        Args:
            name: Property name
            values: Observed values
            bound: Upper bound, tolerance already included
            strict: Whether equality counts as a failure
            offending: Builds a description of the first violating sample
        """
        values = np.asarray(values, dtype=float).reshape(-1)
        worst = float(np.max(values)) if values.size else 0.0
        bad = values >= bound if strict else values > bound
        passed = not bool(np.any(bad))
        details = None
        if not passed and offending is not None:
            details = offending(int(np.argmax(bad)))
        return TestRecord(
            name=name,
            passed=passed,
            worst_value=worst,
            bound=float(bound),
            samples=int(values.size),
            offending=details,
        )

    def health_check(self) -> Dict[str, Any]:
        """
        Check suite health status.

        Returns:
            Dictionary containing health status information
        """
        return {
            "suite_name": self.suite_name,
            "status": "healthy" if self.failed_runs == 0 else "degraded",
            "total_runs": self.total_runs,
            "failed_runs": self.failed_runs,
            "average_processing_time_ms": self.average_processing_time,
            "last_passed": self.last_report.passed if self.last_report else None,
        }

    def _finish(self, report: CheckReport, start_time: float) -> CheckReport:
        """Update run metrics and log the outcome."""
        processing_time_ms = (time.time() - start_time) * 1000
        self.total_runs += 1

        # Update average processing time (exponential moving average)
        if self.total_runs == 1:
            self.average_processing_time = processing_time_ms
        else:
            alpha = 0.1  # Smoothing factor
            self.average_processing_time = (
                alpha * processing_time_ms +
                (1 - alpha) * self.average_processing_time
            )

        if not report.passed:
            self.failed_runs += 1
            failed = ", ".join(r.name for r in report.failed_records)
            logger.warning(f"Suite {self.suite_name} failed: {failed}")
        else:
            logger.info(f"Suite {self.suite_name} passed ({len(report.records)} records, {processing_time_ms:.0f}ms)")

        self.last_report = report
        return report

    def __repr__(self):
        return f"<{self.__class__.__name__}(name='{self.suite_name}', tolerance={self.tolerance:g})>"
