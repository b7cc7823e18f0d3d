"""
Application configuration management.

Centralizes environment variable loading and provides type-safe configuration access.
"""
import logging
from pathlib import Path

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict
from dotenv import load_dotenv

# Load environment variables from multiple files
# 1. First load .env.config (non-sensitive settings)
# 2. Then load .env (local overrides)
load_dotenv('.env.config', override=False)
load_dotenv('.env', override=True)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


class Settings(BaseSettings):
    """Process-level settings loaded from TEXTGRAPH_* environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="TEXTGRAPH_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra='ignore',
    )

    workdir: Path = Field(
        default=Path("./work"),
        description="Directory holding cached corpus, graph, embedding and report artifacts"
    )
    log_level: str = Field(
        default="INFO",
        description="Logging level for the command-line entry point"
    )
    debug: bool = Field(
        default=False,
        description="Enable debug mode with verbose logging"
    )
    jobs: int = Field(
        default=1,
        ge=1,
        description="Worker processes for independent seed runs"
    )
    record_resources: bool = Field(
        default=True,
        description="Record wall-clock and peak memory; disable for byte-identical metrics"
    )

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ValueError(f"Unknown log level: {value}")
        return level

    def effective_log_level(self) -> str:
        """Get the log level, honouring debug mode."""
        return "DEBUG" if self.debug else self.log_level

    def ensure_directories(self) -> None:
        """Ensure the work directory exists."""
        self.workdir.mkdir(parents=True, exist_ok=True)


def load_settings(**overrides) -> Settings:
    """
    Build settings from the environment, applying explicit overrides.

    Args:
        **overrides: Field values that take precedence over the environment
            (None values are ignored)

    Returns:
        Settings instance
    """
    values = {key: value for key, value in overrides.items() if value is not None}
    return Settings(**values)


def configure_logging(settings: Settings) -> None:
    """Configure root logging for command-line use."""
    logging.basicConfig(
        level=settings.effective_log_level(),
        format=LOG_FORMAT,
        force=True,
    )
