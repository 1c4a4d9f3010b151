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

Module: src/cleverprune/domain/value_objects/schedule.py

Hyper-parameter Schedule and Selection Value Objects

Value objects of the hyper-parameter machinery: the per-layer pruning
threshold schedule, the slack-based selection configuration, and the
outcome of a lambda search. Also holds the default candidate grids, each
ordered from the weakest to the strongest refinement.

Key Features:
    - ``Schedule`` validates the triangular threshold invariants
    - ``SelectionConfig`` fixes slack, grid and train/validation split
    - ``default_grid`` returns the per-method grid, strongest last

Version: 0.1.0
License: Apache 2.0
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from cleverprune.domain.errors import DomainValueError

__version__ = "0.1.0"

ALPHA_GRID: Tuple[float, ...] = (
    1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1, 0.01, 1e-3, 1e-4, 1e-5,
)
LAMBDA_GRID: Tuple[float, ...] = (1e-4, 1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3, 1e4)
EPOCH_GRID: Tuple[float, ...] = (1, 5, 10, 20, 30, 50, 100)

DEFAULT_SLACK = 5.0


@dataclass(frozen=True)
class Schedule:
    """Per-layer target mean pruning factors.

    Attributes:
        alpha (float): Target factor at the last refined layer, in (0, 1].
        thresholds (Tuple[float, ...]): ``tau_l`` per refined layer, first
            layer first.

    Raises:
        DomainValueError: If alpha or any threshold leaves (0, 1], the
            thresholds increase, or the first of several is not 1.
    """

    alpha: float
    thresholds: Tuple[float, ...]

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise DomainValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        taus = np.asarray(self.thresholds, dtype=np.float64)
        if taus.size == 0 or np.any(taus <= 0.0) or np.any(taus > 1.0):
            raise DomainValueError("Thresholds must be a nonempty sequence in (0, 1]")
        if np.any(np.diff(taus) > 0.0):
            raise DomainValueError("Thresholds must be non-increasing in the layer index")
        if taus.size >= 2 and taus[0] != 1.0:
            raise DomainValueError("The first threshold of a multi-layer schedule is 1")

    def __len__(self) -> int:
        return len(self.thresholds)


@dataclass(frozen=True)
class SelectionConfig:
    """How a refinement strength is picked from a candidate grid.

    Attributes:
        slack_percent (float): Tolerated validation accuracy drop ``s`` in
            absolute percentage points.
        candidate_grid (Tuple[float, ...]): Hyper-parameter values, weakest
            first and strongest last.
        split_fraction (float): Share of the available data used for
            refitting; the remainder validates.
        seed (int): Seed of the split shuffle.
    """

    slack_percent: float = DEFAULT_SLACK
    candidate_grid: Tuple[float, ...] = ALPHA_GRID
    split_fraction: float = 0.8
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "candidate_grid", tuple(float(v) for v in self.candidate_grid))
        if self.slack_percent < 0.0:
            raise DomainValueError(f"Slack must be >= 0, got {self.slack_percent}")
        if not self.candidate_grid:
            raise DomainValueError("The candidate grid must not be empty")
        if not 0.0 < self.split_fraction < 1.0:
            raise DomainValueError(
                f"split_fraction must lie strictly between 0 and 1, got {self.split_fraction}"
            )

    @property
    def validation_fraction(self) -> float:
        return 1.0 - self.split_fraction


@dataclass(frozen=True)
class LambdaSolution:
    """Result of the exponential lambda search at one site.

    Attributes:
        value (float): Selected regularization strength, >= 0.
        all_units_dead (bool): Set when the site carries no signal, in which
            case ``value`` is 0.
    """

    value: float
    all_units_dead: bool = False


def default_grid(method: str) -> Tuple[float, ...]:
    """Candidate grid for ``method``, ordered weakest to strongest."""
    if method in ("egem", "egem-full", "pca-egem"):
        return ALPHA_GRID
    if method in ("rgem", "ridge"):
        return LAMBDA_GRID
    if method == "retrain":
        return EPOCH_GRID
    if method == "original":
        return (0.0,)
    raise DomainValueError(f"No default grid for method '{method}'")
