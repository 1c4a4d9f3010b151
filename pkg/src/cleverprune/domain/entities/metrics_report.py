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

Module: src/cleverprune/domain/entities/metrics_report.py

Metrics Report Entity

Evaluation outcome of one model on the clean and the fully poisoned test
set, plus the optional diagnostic measurements (sparsity of the artifact's
activation footprint, clean/poisoned separability and logit shifts).

Accuracy at an intermediate poisoning level is a linear interpolation of the
two endpoints, since each test sample is either clean or poisoned.

Version: 0.1.0
License: Apache 2.0
"""

from dataclasses import dataclass, field
from typing import Dict, Optional

from cleverprune.domain.errors import DomainValueError

__version__ = "0.1.0"


@dataclass
class MetricsReport:
    """Accuracy and diagnostics of a model under Clever-Hans evaluation.

    Attributes:
        accuracy_clean (float): Accuracy on the artifact-free test set.
        accuracy_poisoned (float): Accuracy with the artifact on every sample.
        recall_by_group (Dict[str, float]): Positive-class recall per group tag
            on the clean set; absent when a group has no positive samples.
        sparsity_by_layer (Dict[int, Optional[float]]): l2/l1 footprint ratio
            per site, ``None`` where undefined.
        separability_by_layer (Dict[int, float]): Clean/poisoned R^2 per site.
        logit_shift (Dict[str, float]): Summary of per-sample logit changes
            against a reference model.
        run_seed (int): Seed of the run that produced the model.
    """

    accuracy_clean: float
    accuracy_poisoned: float
    recall_by_group: Dict[str, float] = field(default_factory=dict)
    sparsity_by_layer: Dict[int, Optional[float]] = field(default_factory=dict)
    separability_by_layer: Dict[int, float] = field(default_factory=dict)
    logit_shift: Dict[str, float] = field(default_factory=dict)
    run_seed: int = 0

    def __post_init__(self):
        rates = [self.accuracy_clean, self.accuracy_poisoned, *self.recall_by_group.values()]
        if any(not 0.0 <= r <= 1.0 for r in rates):
            raise DomainValueError("Accuracies and recalls must lie in [0, 1]")

    @property
    def gap(self) -> float:
        """Clean minus poisoned accuracy."""
        return self.accuracy_clean - self.accuracy_poisoned

    def accuracy_at(self, level: float) -> float:
        """Accuracy when a fraction ``level`` of test samples carries the artifact."""
        if not 0.0 <= level <= 1.0:
            raise DomainValueError(f"Poisoning level must lie in [0, 1], got {level}")
        return (1.0 - level) * self.accuracy_clean + level * self.accuracy_poisoned
