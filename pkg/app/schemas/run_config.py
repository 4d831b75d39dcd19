"""
Validated command-line configuration.
"""
from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from config.settings import settings


class RunConfig(BaseModel):
    """Flags shared by the command-line entry points."""

    a_re: float = Field(0.5, description="Real part of the fixed point")
    a_im: float = Field(0.0, description="Imaginary part of the fixed point")
    p: int = Field(2, ge=2, description="Order of the symbol")
    k: int = Field(1, ge=1, description="Multiplier index")
    N: Optional[int] = Field(None, ge=2, description="Truncation order, chosen from |a| when omitted")
    angles: int = Field(720, ge=1, description="Number of uniform angles")
    seed: int = Field(20240601, ge=0, description="Root seed")
    trials: int = Field(10000, ge=1, description="Random trials per suite")
    output: Optional[str] = Field(None, description="Output path, standard output when omitted")
    format: Literal["csv", "json", "svg"] = Field("csv", description="Output format")
    symmetry: bool = Field(False, description="Whether symmetry checks run on the angle grid")

    @field_validator("a_im")
    @classmethod
    def validate_fixed_point(cls, v: float, info) -> float:
        """The fixed point must lie in the open unit disk."""
        re = info.data.get("a_re", 0.0)
        if re * re + v * v >= 1.0:
            raise ValueError("Fixed point must lie in the open unit disk")
        return v

    @model_validator(mode="after")
    def resolve_run(self) -> "RunConfig":
        if self.N is None:
            self.N = settings.default_truncation(abs(self.a))
        if self.symmetry and self.angles % self.p != 0:
            raise ValueError(f"--angles must be a multiple of the order {self.p} for symmetry checks")
        return self

    @property
    def a(self) -> complex:
        return complex(self.a_re, self.a_im)
