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

Module: src/cleverprune/application/dto/experiment_config.py

Experiment Configuration

JSON experiment files parsed into pydantic models. Every section rejects
unknown keys, so a misspelt knob fails before any work starts instead of
being silently ignored. Defaults describe the desk-scale Clever-Hans setup:
16x16 glyphs, class 8 poisoned at 70% with a three-pixel corner mark, and
PCA-EGEM refinement with 5 points of slack on 50 samples per class.

The schema is documented in docs/CONFIG_SCHEMA.md.

Version: 0.1.0
License: Apache 2.0
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from cleverprune.domain.errors import ConfigError, DomainValueError
from cleverprune.domain.services.benchmark_service import BenchmarkSetup
from cleverprune.domain.value_objects.artifact_spec import (
    ARTIFACT_KINDS,
    ArtifactSpec,
    artifact_from_dict,
)
from cleverprune.domain.value_objects.attribution_method import (
    AttributionMethod,
    attribution_from_name,
)
from cleverprune.domain.value_objects.refinement_plan import METHODS
from cleverprune.domain.value_objects.schedule import DEFAULT_SLACK
from cleverprune.infrastructure.refiners.base import RefinerOptions

__version__ = "0.1.0"

DEFAULT_SLACK_GRID = [0.0, 1.0, 2.0, 5.0, 10.0, 20.0]
DEFAULT_SAMPLE_GRID = [25, 50, 200, 500, 700]
DEFAULT_ARTIFACTS = ["corner", "blur", "lower-erase", "intensity-shift"]


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


def _check_method(name: str) -> str:
    if name not in METHODS:
        raise ValueError(f"unknown method '{name}', expected one of {list(METHODS)}")
    return name


def _check_artifact(data: Dict[str, Any]) -> Dict[str, Any]:
    try:
        artifact_from_dict(data)
    except DomainValueError as exc:
        raise ValueError(str(exc))
    return data


class DatasetConfig(_Section):
    """Glyph data and poisoning."""

    classes: int = Field(10, ge=1, le=10)
    size: int = Field(16, ge=12)
    n_per_class_train: int = Field(200, ge=1)
    n_per_class_available: int = Field(100, ge=1)
    n_per_class_test: int = Field(100, ge=1)
    target_class: int = Field(8, ge=0)
    p_train: float = Field(0.7, ge=0.0, le=1.0)
    artifact: Dict[str, Any] = Field(default_factory=lambda: {"kind": "corner"})

    @field_validator("artifact")
    @classmethod
    def check_artifact(cls, value: Dict[str, Any]) -> Dict[str, Any]:
        return _check_artifact(value)

    @model_validator(mode="after")
    def check_target_class(self) -> "DatasetConfig":
        if self.target_class >= self.classes:
            raise ValueError(
                f"target_class {self.target_class} outside [0, {self.classes})"
            )
        return self


class ArchitectureConfig(_Section):
    """Desk CNN shape."""

    conv_channels: Tuple[int, ...] = (8, 16)
    kernel: int = Field(3, ge=1)
    hidden: int = Field(64, ge=1)

    @field_validator("conv_channels")
    @classmethod
    def check_channels(cls, value: Tuple[int, ...]) -> Tuple[int, ...]:
        if not value or any(c < 1 for c in value):
            raise ValueError("conv_channels must be a nonempty list of positive counts")
        return value


class TrainingConfig(_Section):
    """Adam training of the Clever-Hans model."""

    epochs: int = Field(10, ge=0)
    lr: float = Field(1e-3, gt=0.0)
    batch: int = Field(32, ge=1)
    clip: Optional[float] = Field(None, gt=0.0)


class SweepConfig(_Section):
    """Grids of the three sweeps."""

    slack_grid: List[float] = Field(default_factory=lambda: list(DEFAULT_SLACK_GRID))
    sample_grid: List[int] = Field(default_factory=lambda: list(DEFAULT_SAMPLE_GRID))
    artifacts: List[str] = Field(default_factory=lambda: list(DEFAULT_ARTIFACTS))
    methods: Optional[List[str]] = None

    @field_validator("slack_grid")
    @classmethod
    def check_slack_grid(cls, value: List[float]) -> List[float]:
        if not value or any(s < 0.0 for s in value):
            raise ValueError("slack_grid must be a nonempty list of values >= 0")
        return value

    @field_validator("sample_grid")
    @classmethod
    def check_sample_grid(cls, value: List[int]) -> List[int]:
        if not value or any(n < 1 for n in value):
            raise ValueError("sample_grid must be a nonempty list of counts >= 1")
        return value

    @field_validator("artifacts")
    @classmethod
    def check_artifacts(cls, value: List[str]) -> List[str]:
        unknown = [kind for kind in value if kind not in ARTIFACT_KINDS]
        if not value or unknown:
            raise ValueError(
                f"artifacts must name known kinds {sorted(ARTIFACT_KINDS)}, got {value}"
            )
        return value

    @field_validator("methods")
    @classmethod
    def check_methods(cls, value: Optional[List[str]]) -> Optional[List[str]]:
        if value is None:
            return None
        if not value:
            raise ValueError("methods must not be empty")
        return [_check_method(m) for m in value]


class ExplainConfig(_Section):
    """Attribution request for the ``explain`` command."""

    method: str = "lrp"
    steps: int = Field(64, ge=1)
    gamma: float = Field(0.0, ge=0.0)
    epsilon: float = Field(1e-9, ge=0.0)
    sample_index: int = Field(0, ge=0)
    target: Optional[int] = Field(None, ge=0)
    layer: Optional[int] = None

    @field_validator("method")
    @classmethod
    def check_method(cls, value: str) -> str:
        if value.lower() not in ("gi", "ig", "lrp"):
            raise ValueError(f"unknown attribution method '{value}' (gi, ig or lrp)")
        return value.lower()

    def attribution(self) -> AttributionMethod:
        return attribution_from_name(self.method, self.steps, self.gamma, self.epsilon)


class ExperimentConfig(_Section):
    """Top-level experiment file.

    Attributes:
        seed (int): Seed of the first run; run ``k`` uses ``seed + k``.
        runs (int): Independent runs per sweep setting.
        method (str): Refinement method for ``refine`` and ``evaluate``.
        grid (Optional[List[float]]): Candidate override, weakest first.
        slack (float): Tolerated validation accuracy drop in points.
        n_refine (int): Refinement samples per class.
        retrain_lr (float): Fine-tuning step size of the retrain baseline.
        message_method (str): Message factors for ``egem-full`` (gi or lrp).
        weight_space (bool): Prune through the next layer's weights instead
            of inserting Scale layers.
        model_path (Optional[str]): Model to refine or evaluate; defaults to
            the model written by ``train`` in the output directory.
        output_dir (Optional[str]): Where artifacts go; defaults to the
            ``CLEVER_PRUNE_OUTPUT_DIR`` setting.
    """

    seed: int = Field(0, ge=0)
    runs: int = Field(1, ge=1)
    dataset: DatasetConfig = Field(default_factory=DatasetConfig)
    architecture: ArchitectureConfig = Field(default_factory=ArchitectureConfig)
    training: TrainingConfig = Field(default_factory=TrainingConfig)
    method: str = "pca-egem"
    grid: Optional[List[float]] = None
    slack: float = Field(DEFAULT_SLACK, ge=0.0)
    n_refine: int = Field(50, ge=1)
    retrain_lr: float = Field(1e-3, gt=0.0)
    message_method: str = "gi"
    weight_space: bool = False
    model_path: Optional[str] = None
    output_dir: Optional[str] = None
    sweep: SweepConfig = Field(default_factory=SweepConfig)
    explain: ExplainConfig = Field(default_factory=ExplainConfig)

    @field_validator("method")
    @classmethod
    def check_method(cls, value: str) -> str:
        return _check_method(value)

    @field_validator("grid")
    @classmethod
    def check_grid(cls, value: Optional[List[float]]) -> Optional[List[float]]:
        if value is not None and not value:
            raise ValueError("grid must not be empty when given")
        return value

    @field_validator("message_method")
    @classmethod
    def check_message_method(cls, value: str) -> str:
        if value.lower() not in ("gi", "lrp"):
            raise ValueError(f"message_method must be gi or lrp, got '{value}'")
        return value.lower()

    @classmethod
    def load(cls, path: Path) -> "ExperimentConfig":
        """Parse a JSON experiment file.

        Raises:
            ConfigError: If the file is missing or not valid JSON.
            pydantic.ValidationError: If the content violates the schema.
        """
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"Config file not found: {path}")
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"Config file {path} is not valid JSON: {exc}")
        return cls.model_validate(data)

    def with_overrides(
        self, seed: Optional[int] = None, output_dir: Optional[str] = None
    ) -> "ExperimentConfig":
        """Apply command-line overrides, which win over the file."""
        updates: Dict[str, Any] = {}
        if seed is not None:
            updates["seed"] = seed
        if output_dir is not None:
            updates["output_dir"] = str(output_dir)
        return self.model_copy(update=updates)

    def sweep_methods(self) -> List[str]:
        """Methods each sweep refines with; ``method`` alone unless ``sweep.methods`` is set."""
        return list(self.sweep.methods) if self.sweep.methods else [self.method]

    def run_seeds(self) -> List[int]:
        return [self.seed + k for k in range(self.runs)]

    def artifact_spec(self) -> ArtifactSpec:
        return artifact_from_dict(self.dataset.artifact)

    def message_attribution(self) -> AttributionMethod:
        return attribution_from_name(self.message_method, epsilon=self.explain.epsilon)

    def refiner_options(self, seed: Optional[int] = None) -> RefinerOptions:
        return RefinerOptions(
            message_method=self.message_attribution(),
            weight_space=self.weight_space,
            retrain_lr=self.retrain_lr,
            batch=self.training.batch,
            clip=self.training.clip,
            seed=self.seed if seed is None else seed,
        )

    def benchmark_setup(self, artifact: Optional[ArtifactSpec] = None) -> BenchmarkSetup:
        """Benchmark parameters, optionally with a different artifact."""
        d, a, t = self.dataset, self.architecture, self.training
        return BenchmarkSetup(
            classes=d.classes,
            size=d.size,
            n_per_class_train=d.n_per_class_train,
            n_per_class_available=d.n_per_class_available,
            n_per_class_test=d.n_per_class_test,
            target_class=d.target_class,
            p_train=d.p_train,
            artifact=artifact or self.artifact_spec(),
            conv_channels=tuple(a.conv_channels),
            kernel=a.kernel,
            hidden=a.hidden,
            epochs=t.epochs,
            lr=t.lr,
            batch=t.batch,
            clip=t.clip,
        )
