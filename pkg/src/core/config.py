"""Runtime settings loaded from the environment."""

import logging
import os
from typing import Dict, Optional
from dotenv import load_dotenv


LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


class Config:
    """Manages runtime settings that are not part of an experiment file."""

    @staticmethod
    def load_from_env(env_path: Optional[str] = None) -> Dict:
        """Load runtime settings from the environment and an optional .env file.

        Args:
            env_path: Path to .env file. If None, searches for .env in current directory.

        Returns:
            Dictionary with ``threads`` (parallelism cap) and ``log_level``.
        """
        if env_path:
            load_dotenv(env_path)
        else:
            load_dotenv()

        config = {
            "threads": int(os.getenv("BESOVLAB_THREADS", str(os.cpu_count() or 1))),
            "log_level": os.getenv("BESOVLAB_LOG_LEVEL", "INFO").upper(),
        }

        return config

    @staticmethod
    def validate_config(config: Dict) -> bool:
        """Validate runtime settings.

        Raises:
            ValueError: If a setting is out of range.
        """
        if config["threads"] < 1:
            raise ValueError("BESOVLAB_THREADS must be at least 1")

        if config["log_level"] not in LOG_LEVELS:
            raise ValueError(
                f"BESOVLAB_LOG_LEVEL must be one of: {', '.join(LOG_LEVELS)}"
            )

        return True

    @staticmethod
    def log_level(config: Dict) -> int:
        """Numeric logging level of the settings."""
        return getattr(logging, config.get("log_level", "INFO"))
