"""Application configuration via pydantic-settings."""

from __future__ import annotations

from pathlib import Path

from pydantic_settings import BaseSettings

# Project root: two levels up from this file (src/gnnlab/config.py -> project root)
_PROJECT_ROOT = Path(__file__).resolve().parent.parent.parent


class Settings(BaseSettings):
    app_name: str = "GNN Expressivity Lab"
    debug: bool = False
    log_level: str = "INFO"

    # Randomness: numpy PCG64, seeded through SeedSequence
    rng_algorithm: str = "PCG64"
    default_seed: int = 0

    # Weisfeiler-Lehman refinement
    wl_max_entries: int = 10_000_000
    wl_max_rounds: int | None = None

    # Generators
    regular_max_retries: int = 1000

    # Separation lab
    separation_tol: float = 1e-4
    separation_seeds: int = 10

    # Optimizer
    learning_rate: float = 1e-4
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8

    # joblib workers for pair / instance level parallelism
    n_jobs: int = 1

    # Artifacts
    out_dir: str = "runs"
    db_path: str = str(_PROJECT_ROOT / "gnnlab_runs.db")

    model_config = {"env_prefix": "GNNLAB_"}


settings = Settings()
