from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import Field, ValidationError
from typing import Optional
import sys
import logging

logger = logging.getLogger(__name__)


class AppSettings(BaseSettings):
    """
    Runtime settings loaded from environment variables and .env file.
    Uses Pydantic for validation.
    """
    model_config = SettingsConfigDict(
        env_file='.env',
        env_file_encoding='utf-8',
        extra='ignore',
        case_sensitive=False
    )

    BP_SEED: int = Field(
        default=20140101,
        ge=0,
        lt=2 ** 64,
        description="Default master seed used when no --seed flag or config-file seed is given."
    )
    BP_WORKERS: int = Field(default=1, ge=1, description="Default number of benchmark worker threads.")
    BP_LOG_LEVEL: str = Field(default="INFO", description="Logging level for the application logger.")
    BP_CONFIG_FILE: Optional[str] = Field(
        default=None,
        description="Optional key-value config file read before command-line flags are applied."
    )


# Pydantic will raise a ValidationError if a variable has the wrong type or range.
try:
    app_env = AppSettings()
except ValidationError as e:
    error_messages = []
    for error in e.errors():
        field = ".".join(str(loc) for loc in error['loc'])
        message = error['msg']
        error_messages.append(f"  - Field '{field}': {message}")

    logger.error("Environment variable validation failed!\n" + "\n".join(error_messages))

    sys.exit(
        "Configuration Error: Invalid environment variables. Please check the logs and your .env file or environment settings.")

# To access: from app.app_env import app_env
# e.g., app_env.BP_SEED
