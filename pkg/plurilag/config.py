"""Application configuration settings."""

from typing import Optional

from dotenv import load_dotenv
from pydantic_settings import BaseSettings, SettingsConfigDict

load_dotenv()


class Settings(BaseSettings):
    """Application settings."""

    model_config = SettingsConfigDict(
        env_prefix="PLURILAG_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )

    # Application
    app_name: str = "plurilag"
    app_version: str = "1.0.0"

    # Verification defaults
    default_n: int = 3
    jobs: int = 0  # 0 means all available cores
    output_format: str = "text"

    # Polynomial cache (PLURILAG_CACHE_DIR overrides)
    cache_dir: str = ".plurilag-cache"

    # Logging
    log_level: str = "INFO"
    log_file: Optional[str] = None
    log_rotation: str = "1 day"
    log_retention: str = "30 days"


# Global settings instance
settings = Settings()
