"""Toolkit configuration loaded from environment variables."""

from __future__ import annotations

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Solver caps and defaults, overridable with ``LATTICELP_*`` variables or a .env file."""

    model_config = {
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "env_prefix": "LATTICELP_",
        "extra": "ignore",
    }

    # Lattices
    lattice_cap: int = 64

    # Norm engine
    family_cap: int = 100_000
    barrier_tolerance: float = 1e-9

    # Morphisms
    search_cap: int = 200_000
    measure_grid_cap: int = 512

    # Density
    atom_cap: int = 4096
    max_modulus: int = 10**7

    # Sampled checks
    sample_size: int = 50
    pattern_dim_cap: int = 6

    # Logging
    log_level: str = "INFO"

    # MCP server
    mcp_host: str = "0.0.0.0"
    mcp_port: int = 8005


settings = Settings()
