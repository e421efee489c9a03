from pathlib import Path
from typing import Any

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class RelayDelayConfig(BaseSettings):
    """
    Numerical and runtime settings for relaydelay.
    Priority: Environment Variables (RELAYDELAY_*) > Env File > Defaults.
    """

    # --- Error-exponent search ---
    RHO_GRID_POINTS: int = Field(default=256, ge=2, description="Coarse rho grid size on (0, 1]")
    RHO_MIN: float = Field(default=1e-6, gt=0.0, lt=1.0, description="Lower end of the rho search domain")
    RHO_TOL: float = Field(default=1e-10, gt=0.0, description="Golden-section tolerance in rho")

    # --- Channel algebra ---
    LOG_DOMAIN_HOPS: int = Field(
        default=30, ge=0, description="Segments spanning more hops than this use log-domain products"
    )

    # --- Planner ---
    ORACLE_MAX_RELAYS: int = Field(default=20, ge=0, description="Brute-force oracle refusal limit on H")
    TIE_RTOL: float = Field(default=1e-12, ge=0.0, description="Relative tolerance for tied plan delays")
    WORKERS: int = Field(default=1, ge=1, description="Thread pool size for oracle and sweep evaluation")

    # --- Reporting ---
    CSV_DIGITS: int = Field(default=12, ge=1, le=17, description="Significant digits for CSV floats")
    DEBUG: bool = Field(default=False, description="Enable debug logging in the CLI")

    # Path.home() can fail when the environment is cleared
    try:
        _env_files = [str(Path.home() / ".relaydelay" / "config.env"), ".env"]
    except (RuntimeError, KeyError):
        _env_files = [".env"]

    model_config = SettingsConfigDict(
        env_prefix="RELAYDELAY_",
        env_file=_env_files,
        env_file_encoding="utf-8",
        extra="ignore",
    )

    def get(self, key: str, default: Any = None) -> Any:
        """Get a configuration value with precedence."""
        return getattr(self, key, default)


# Singleton instance
settings = RelayDelayConfig()
config = settings
