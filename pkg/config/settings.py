"""
Application configuration settings.
"""
import os
from functools import lru_cache

from pydantic import field_validator
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings configuration."""

    # Logging Configuration
    log_level: str = "INFO"
    log_format: str = "console"  # console|json

    # Parallelism (NRC_THREADS, 0 means all cores)
    threads: int = 0

    # Symbol Construction
    max_fixed_point_modulus: float = 0.95
    extended_precision_modulus: float = 0.95
    extended_precision_digits: int = 40

    # Support-Function Sweep
    default_angles: int = 720
    dense_eigen_max_n: int = 512
    eigen_tolerance: float = 1e-11
    eigen_max_iterations: int = 20000
    parallel_line_threshold: float = 1e-6
    convexity_tolerance: float = 1e-9

    # Truncation
    truncation_tail_tolerance: float = 1e-13
    truncation_start_n: int = 256
    truncation_max_n: int = 1 << 20
    extremal_tail: float = 1e-12

    # Sampling
    sampler_basis_size: int = 32
    default_trials: int = 10000
    default_seed: int = 20240601
    trial_batches: int = 8

    # Assertions
    assertion_tolerance: float = 1e-9
    strict_equality_tolerance: float = 1e-12

    class Config:
        env_prefix = "NRC_"
        env_file = ".env"
        env_file_encoding = "utf-8"
        case_sensitive = False
        extra = "ignore"

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate log level."""
        level = v.upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Unknown log level: {v}")
        return level

    @field_validator("log_format")
    @classmethod
    def validate_log_format(cls, v: str) -> str:
        """Validate log renderer."""
        if v not in ("console", "json"):
            raise ValueError("Log format must be 'console' or 'json'")
        return v

    @field_validator("threads", "trial_batches")
    @classmethod
    def validate_non_negative(cls, v: int) -> int:
        if v < 0:
            raise ValueError("Value must be non-negative")
        return v

    @field_validator("max_fixed_point_modulus", "extended_precision_modulus")
    @classmethod
    def validate_modulus(cls, v: float) -> float:
        """Validate a fixed-point modulus threshold."""
        if not 0.0 < v < 1.0:
            raise ValueError("Modulus threshold must lie in (0, 1)")
        return v

    @field_validator(
        "eigen_tolerance",
        "parallel_line_threshold",
        "convexity_tolerance",
        "truncation_tail_tolerance",
        "extremal_tail",
        "assertion_tolerance",
        "strict_equality_tolerance",
    )
    @classmethod
    def validate_tolerance(cls, v: float) -> float:
        """Validate tolerances."""
        if v <= 0.0:
            raise ValueError("Tolerances must be positive")
        return v

    def effective_threads(self) -> int:
        """Resolve the worker count for parallel sweeps."""
        if self.threads > 0:
            return self.threads
        return os.cpu_count() or 1

    def default_truncation(self, modulus: float) -> int:
        """Default truncation order for a fixed point of the given modulus."""
        if modulus <= 0.6:
            return 256
        if modulus <= 0.8:
            return 512
        return 1024


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


# Global settings instance
settings = get_settings()
