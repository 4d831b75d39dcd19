"""
Pydantic schemas for check-suite reports.
"""
from typing import Any, Dict, List, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field, model_validator


class TestRecord(BaseModel):
    """Outcome of one property inside a suite."""

    __test__ = False  # not a pytest class

    model_config = ConfigDict(populate_by_name=True)

    name: str = Field(..., description="Property being checked")
    passed: bool = Field(..., alias="pass", description="Whether the property held on every sample")
    worst_value: Optional[float] = Field(None, description="Worst observed value or residual")
    bound: Optional[float] = Field(None, description="Bound the worst value is compared against")
    samples: int = Field(0, ge=0, description="Number of samples checked")
    detail: Optional[str] = Field(None, description="Human-readable note")
    offending: Optional[Dict[str, Any]] = Field(None, description="First violating sample, with its seed")


class CheckReport(BaseModel):
    """Machine-readable result of a property or acceptance suite."""

    model_config = ConfigDict(populate_by_name=True)

    suite: str = Field(..., description="Suite name")
    passed: bool = Field(..., alias="pass", description="True iff every record passed")
    trials: int = Field(0, ge=0, description="Random trials drawn")
    seed: Optional[int] = Field(None, description="Root seed of the trial batches")
    worst_value: Optional[float] = Field(None, description="Headline worst value")
    bound: Optional[float] = Field(None, description="Headline bound")
    epsilon_trunc: Optional[float] = Field(None, description="Truncation budget folded into tolerances")
    parameters: Dict[str, Any] = Field(default_factory=dict, description="Inputs the suite ran with")
    records: List[TestRecord] = Field(default_factory=list, description="Per-property outcomes")

    @model_validator(mode="after")
    def validate_pass_flag(self) -> "CheckReport":
        """A report fails exactly when one of its records fails."""
        expected = all(record.passed for record in self.records)
        if self.passed != expected:
            raise ValueError(f"Report pass flag {self.passed} contradicts its records ({expected})")
        return self

    @classmethod
    def from_records(cls, suite: str, records: Sequence[TestRecord], **kwargs: Any) -> "CheckReport":
        return cls(suite=suite, passed=all(r.passed for r in records), records=list(records), **kwargs)

    @classmethod
    def merge(cls, suite: str, reports: Sequence["CheckReport"]) -> "CheckReport":
        """Combine several reports; records are prefixed with their suite name."""
        records = []
        for report in reports:
            for record in report.records:
                records.append(record.model_copy(update={"name": f"{report.suite}.{record.name}"}))
        budgets = [r.epsilon_trunc for r in reports if r.epsilon_trunc is not None]
        return cls.from_records(
            suite,
            records,
            trials=sum(r.trials for r in reports),
            seed=reports[0].seed if reports else None,
            epsilon_trunc=max(budgets) if budgets else None,
            parameters={r.suite: r.parameters for r in reports},
        )

    @property
    def failed_records(self) -> List[TestRecord]:
        return [r for r in self.records if not r.passed]

    def to_json_dict(self) -> Dict[str, Any]:
        return self.model_dump(by_alias=True)
