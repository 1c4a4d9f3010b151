"""
Module: src/cleverprune/application/use_cases/run_directory.py

File layout of an output directory shared by the commands: ``train``
writes the model and the datasets, ``refine`` and ``evaluate`` read them
back.

Version: 0.1.0
License: Apache 2.0
"""

from pathlib import Path
from typing import Optional

from cleverprune.domain.errors import ConfigError
from cleverprune.infrastructure.config import get_settings

__version__ = "0.1.0"


class RunDirectory:
    """Named paths inside one output directory."""

    def __init__(self, root: Optional[str] = None):
        self.root = Path(root) if root else get_settings().output_dir

    @property
    def model(self) -> Path:
        return self.root / "model.egem"

    @property
    def training_log(self) -> Path:
        return self.root / "training_log.csv"

    @property
    def available(self) -> Path:
        return self.root / "available.egts"

    @property
    def clean_test(self) -> Path:
        return self.root / "clean_test.egts"

    @property
    def poisoned_test(self) -> Path:
        return self.root / "poisoned_test.egts"

    @property
    def metrics(self) -> Path:
        return self.root / "metrics.csv"

    @property
    def logit_shift(self) -> Path:
        return self.root / "logit_shift.csv"

    @property
    def relevance(self) -> Path:
        return self.root / "relevance.csv"

    def refined(self, method: str) -> Path:
        return self.root / f"refined_{method}.egem"

    def selection_trace(self, method: str) -> Path:
        return self.root / f"selection_{method}.csv"

    def plan(self, method: str) -> Path:
        return self.root / f"plan_{method}.json"

    def sweep(self, kind: str) -> Path:
        return self.root / f"sweep_{kind}.csv"

    def diagnostic(self, name: str) -> Path:
        return self.root / f"{name}.csv"

    def require(self, path: Path) -> Path:
        """Return ``path`` if it exists.

        Raises:
            ConfigError: Naming the missing file.
        """
        if not path.exists():
            raise ConfigError(f"Required file not found: {path} (run 'train' first?)")
        return path
