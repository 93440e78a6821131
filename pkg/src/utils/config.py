from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Process-wide defaults loaded from RELCLOCK_* environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="RELCLOCK_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Logging
    log_level: str = "INFO"
    log_dir: str = "logs"

    # Model defaults
    default_omega: float = Field(default=1.0, gt=0)
    quadrature_nodes: int = Field(default=256, ge=64)

    # Tomography
    mle_max_iterations: int = Field(default=10_000, ge=1)
    mle_tolerance: float = Field(default=1e-10, gt=0)

    # Sweeps
    max_workers: int = Field(default=4, ge=1)


settings = Settings()
