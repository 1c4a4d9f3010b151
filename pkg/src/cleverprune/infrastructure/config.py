"""
# Copyright 2026 The cleverprune Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

Module: src/cleverprune/infrastructure/config.py

Runtime configuration for cleverprune.

Loads an optional ``.env`` file from the project root, then reads the
runtime settings from environment variables with defaults. Experiment
parameters live in the JSON experiment configuration instead; this module
only covers how the process runs (worker threads, log level, where output
goes).

Version: 0.1.0
License: Apache 2.0
"""

import logging
import os
import sys
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

logging.basicConfig(
    level=logging.INFO,
    format="%(message)s",
    handlers=[logging.StreamHandler(sys.stdout)],
)

__version__ = "0.1.0"

logger = logging.getLogger(__name__)

project_root = Path(__file__).parent.parent.parent.parent
env_file = project_root / ".env"

if env_file.exists():
    load_dotenv(env_file)
    logger.debug(f"Loaded configuration from {env_file}")
else:
    logger.debug(f"No .env file found at {env_file}")


class CleverPruneSettings:
    """Runtime settings read from the environment.

    Attributes:
        threads (int): Worker threads for candidate refits and sweep runs
            (``CLEVER_PRUNE_THREADS``, default 1).
        log_level (str): Root log level (``CLEVER_PRUNE_LOG_LEVEL``, default INFO).
        output_dir (Path): Default directory for run artifacts
            (``CLEVER_PRUNE_OUTPUT_DIR``, default ``runs``).
    """

    def __init__(self):
        self.threads = max(1, int(os.getenv("CLEVER_PRUNE_THREADS", "1")))
        self.log_level = os.getenv("CLEVER_PRUNE_LOG_LEVEL", "INFO").upper()
        self.output_dir = Path(os.getenv("CLEVER_PRUNE_OUTPUT_DIR", "runs"))
        logging.getLogger().setLevel(self.log_level)

    def resolve_threads(self, override: Optional[int] = None) -> int:
        """Flag value when given, otherwise the environment setting."""
        return max(1, override) if override else self.threads


settings = CleverPruneSettings()


def get_settings() -> CleverPruneSettings:
    """Return the settings instance configured at import time.

    Example:
        >>> from cleverprune.infrastructure.config import get_settings
        >>> get_settings().threads
        1
    """
    return settings


def check_configuration() -> None:
    """Log the active runtime settings."""
    logger.info("cleverprune Configuration Status")
    logger.info("=" * 40)
    logger.info(f"  .env file: {env_file if env_file.exists() else 'not found'}")
    logger.info(f"  Worker threads: {settings.threads}")
    logger.info(f"  Log level: {settings.log_level}")
    logger.info(f"  Output directory: {settings.output_dir}")
    logger.info("=" * 40)


if __name__ == "__main__":
    check_configuration()
