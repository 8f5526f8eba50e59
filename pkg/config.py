"""
Configuration for the Monge-Ampere solver service.

Every CLI flag and request field defaults to the matching setting; override
with MONGE_AMPERE_* environment variables.
"""

from functools import lru_cache
from typing import Optional

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings."""

    # API settings
    api_host: str = "0.0.0.0"
    api_port: int = 8000

    # Artifacts
    output_dir: str = "runs_output"

    # Solver defaults
    mu: float = 50.0
    tol: float = 1e-8
    max_iter: int = 1_000_000
    stencil_width: int = 2
    epsilon: float = 1e-14
    epsilon_sign: str = "plus"
    poisson: str = "fast"
    poisson_tol: float = 1e-12
    poisson_max_iter: int = 10_000
    dirac_spread: str = "nearest"
    stopping: str = "residual"

    # Verification sampling
    seed: int = 7

    # None means all available cores
    threads: Optional[int] = None

    log_level: str = "INFO"

    model_config = {"env_prefix": "MONGE_AMPERE_"}


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
