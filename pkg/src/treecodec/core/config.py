"""
Toolkit Configuration

Centralized settings management using Pydantic BaseSettings.
Values are loaded from ``TREECODEC_*`` environment variables or a .env file;
CLI flags override them per run.
"""

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Toolkit settings with environment variable binding.

    Every field has a default, so the toolkit runs without any environment.

    Optional env vars (prefix ``TREECODEC_``):
        LOG_LEVEL (INFO), SEED (0), ALPHA (1.0), PLR_CAP_SLACK (2),
        DEFAULT_PLR_CAP (10), MAX_NODES (200), SPACE_PERMS (1000),
        NLL_PERMS (100), MMD_SIGMA (1.0), MAX_SAMPLE_ATTEMPTS (1000), EPOCHS (1)
    """

    PROJECT_NAME: str = "treecodec"

    # Logging
    LOG_LEVEL: str = "INFO"

    # Reproducibility
    SEED: int = 0

    # Decision model
    ALPHA: float = 1.0
    EPOCHS: int = 1
    PLR_CAP_SLACK: int = 2
    DEFAULT_PLR_CAP: int = 10

    # Sampling
    MAX_NODES: int = 200
    MAX_SAMPLE_ATTEMPTS: int = 1000

    # Evaluation
    SPACE_PERMS: int = 1000
    NLL_PERMS: int = 100
    MMD_SIGMA: float = 1.0

    model_config = SettingsConfigDict(
        env_prefix="TREECODEC_",
        env_file=".env",
        env_ignore_empty=True,
        extra="ignore",  # Silently ignore unknown env vars
    )


settings = Settings()
