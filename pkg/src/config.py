"""
Configuration settings for the complementary sequence toolkit.
Loads and validates all environment variables.
"""

from pathlib import Path

from pydantic import field_validator
from pydantic_settings import BaseSettings

PROJECT_ROOT = Path(__file__).resolve().parent.parent


class Settings(BaseSettings):
    """Application settings loaded from environment variables (prefix COMPSEQ_)."""

    # Workers
    jobs: int = 1  # COMPSEQ_JOBS, default for --jobs

    # Exhaustive search limits
    exhaustive_cap: int = 2 ** 26  # max |alphabet|^m candidates
    golay_max_length: int = 20     # exhaustive Golay-mate search bound

    # Simulated annealing schedule
    anneal_budget: int = 5_000_000   # cost evaluations per chain
    anneal_cooling: float = 0.995    # T_{k+1} = cooling * T_k
    anneal_stagnation_factor: int = 10  # restart after factor * half_len idle units
    anneal_stagnation_unit: str = "sweep"  # "sweep" (2*half_len proposals) or "evaluation"
    anneal_history_every: int = 10_000  # periodic history sample interval

    # Reporting
    max_reported_pairs: int = 1000
    schema_version: str = "1.0"

    # Bundled published data
    data_dir: Path = PROJECT_ROOT / "data" / "reference"

    # Application Settings
    environment: str = "development"
    log_level: str = "INFO"

    @field_validator('*', mode='before')
    @classmethod
    def strip_strings(cls, v):
        """Strip whitespace from all string values."""
        if isinstance(v, str):
            return v.strip()
        return v

    @field_validator('anneal_stagnation_unit')
    @classmethod
    def stagnation_unit(cls, v: str) -> str:
        if v not in ("sweep", "evaluation"):
            raise ValueError('must be "sweep" or "evaluation"')
        return v

    @field_validator('jobs', 'exhaustive_cap', 'golay_max_length', 'anneal_budget')
    @classmethod
    def positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError("must be a positive integer")
        return v

    class Config:
        env_file = ".env"
        env_prefix = "COMPSEQ_"
        case_sensitive = False


# Global settings instance
settings = Settings()
