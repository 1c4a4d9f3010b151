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

Module: src/cleverprune/infrastructure/hypersearch/selection.py

Slack-based Model Selection

Chooses the refinement strength without ever looking at artifact-carrying
data: the available data is split once into a refit part and a validation
part, every grid candidate is refitted and validated, and the strongest
candidate whose validation accuracy stays within the slack of the original
model wins.

Key Features:
    - Seeded, fixed 80/20 split per selection call
    - Candidates evaluated in parallel on independent model copies
    - Deterministic reduction in grid order
    - Selection trace as a pandas DataFrame (candidate, val_accuracy, chosen)

Version: 0.1.0
License: Apache 2.0
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt
import pandas as pd

from cleverprune.domain.entities.dataset import Dataset
from cleverprune.domain.entities.model import Model
from cleverprune.domain.errors import DomainValueError
from cleverprune.domain.value_objects.refinement_plan import RefinementPlan
from cleverprune.domain.value_objects.schedule import SelectionConfig
from cleverprune.domain.value_objects.tensor import SeededRng
from cleverprune.infrastructure.network import accuracy

__version__ = "0.1.0"

logger = logging.getLogger(__name__)

TRACE_COLUMNS = ("candidate", "val_accuracy", "chosen")
ACCURACY_TOLERANCE = 1e-12


@dataclass
class SelectionResult:
    """Outcome of one slack-based selection.

    Attributes:
        candidates (List[float]): The grid, weakest first.
        val_accuracies (List[float]): Validation accuracy per candidate.
        baseline_accuracy (float): Validation accuracy of the original model.
        chosen_index (int): Position of the selected candidate in the grid.
        no_candidate (bool): Set when no candidate met the threshold and the
            weakest one was returned instead.
        plans (List[RefinementPlan]): Plan of every candidate.
        models (List[Model]): Refitted model of every candidate.
    """

    candidates: List[float]
    val_accuracies: List[float]
    baseline_accuracy: float
    chosen_index: int
    no_candidate: bool = False
    plans: List[RefinementPlan] = field(default_factory=list, repr=False)
    models: List[Model] = field(default_factory=list, repr=False)

    @property
    def chosen_value(self) -> float:
        return self.candidates[self.chosen_index]

    def trace(self) -> pd.DataFrame:
        """Per-candidate validation accuracies with the chosen row flagged."""
        return pd.DataFrame(
            {
                "candidate": self.candidates,
                "val_accuracy": self.val_accuracies,
                "chosen": [i == self.chosen_index for i in range(len(self.candidates))],
            },
            columns=list(TRACE_COLUMNS),
        )


def split_indices(
    n: int, config: SelectionConfig
) -> Tuple[npt.NDArray[np.int64], npt.NDArray[np.int64]]:
    """Seeded refit/validation split; validation gets ``ceil(0.2 n)`` samples.

    Raises:
        DomainValueError: If either part would be empty.
    """
    n_val = math.ceil(config.validation_fraction * n - 1e-9)
    if n_val < 1 or n - n_val < 1:
        raise DomainValueError(
            f"Cannot split {n} samples into nonempty refit and validation parts"
        )
    order = SeededRng(config.seed).child("split").permutation(n)
    return np.sort(order[n_val:]), np.sort(order[:n_val])


def choose_candidate(
    baseline_accuracy: float, val_accuracies: Sequence[float], slack_percent: float
) -> Tuple[int, bool]:
    """Strongest candidate within ``slack_percent`` points of the baseline.

    Candidates are ordered weakest first. Falls back to index 0 with the
    flag set when none qualifies.

    Example:
        >>> choose_candidate(0.90, [0.90, 0.88, 0.86, 0.80], 5.0)
        (2, False)
    """
    if not val_accuracies:
        raise DomainValueError("No candidates to choose from")
    threshold = baseline_accuracy - slack_percent / 100.0
    for index in range(len(val_accuracies) - 1, -1, -1):
        if val_accuracies[index] >= threshold - ACCURACY_TOLERANCE:
            return index, False
    logger.warning(
        f"No candidate reaches validation accuracy {threshold:.4f}; using the weakest"
    )
    return 0, True


def score_candidates(
    model: Model,
    refiner,
    grid: Sequence[float],
    refit: Dataset,
    validation: Dataset,
    threads: int = 1,
) -> Tuple[List[RefinementPlan], List[Model], List[float]]:
    """Refit every candidate on ``refit`` and measure accuracy on ``validation``."""

    def run(value: float):
        plan, refined = refiner.refine(model, refit, value)
        score = accuracy(refined, validation.images, validation.labels)
        logger.debug(f"{refiner.method} candidate {value:g}: val accuracy {score:.4f}")
        return plan, refined, score

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(run, grid))
    else:
        outcomes = [run(value) for value in grid]
    plans = [o[0] for o in outcomes]
    models = [o[1] for o in outcomes]
    scores = [o[2] for o in outcomes]
    return plans, models, scores


def select_by_slack(
    model: Model,
    refiner,
    data: Dataset,
    config: SelectionConfig,
    grid: Optional[Sequence[float]] = None,
    threads: int = 1,
) -> Tuple[RefinementPlan, Model, SelectionResult]:
    """Pick the strongest refinement that costs at most the slack in validation accuracy.

    Args:
        model (Model): The original model.
        refiner (Refiner): Refinement method to tune.
        data (Dataset): Available (clean, correctly predicted) data.
        config (SelectionConfig): Slack, split and seed.
        grid (Optional[Sequence[float]]): Candidates weakest first; defaults
            to ``config.candidate_grid``.
        threads (int): Candidates refitted concurrently.

    Returns:
        Tuple: The chosen plan, the model refitted with it on the refit
            part, and the full selection record.

    Raises:
        DomainValueError: If the validation part would be empty.
    """
    grid = list(config.candidate_grid if grid is None else grid)
    refit_idx, val_idx = split_indices(len(data), config)
    refit, validation = data.subset(refit_idx), data.subset(val_idx)
    baseline = accuracy(model, validation.images, validation.labels)

    plans, models, scores = score_candidates(model, refiner, grid, refit, validation, threads)
    index, no_candidate = choose_candidate(baseline, scores, config.slack_percent)
    logger.info(
        f"{refiner.method}: chose {grid[index]:g} "
        f"(val accuracy {scores[index]:.4f}, original {baseline:.4f})"
    )
    result = SelectionResult(
        candidates=[float(v) for v in grid],
        val_accuracies=scores,
        baseline_accuracy=baseline,
        chosen_index=index,
        no_candidate=no_candidate,
        plans=plans,
        models=models,
    )
    return plans[index], models[index], result


def reselect(result: SelectionResult, slack_percent: float) -> SelectionResult:
    """Re-apply the slack rule to an existing candidate table.

    Lets a slack sweep reuse one set of refits; the chosen plan and model
    are ``result.plans[chosen_index]`` and ``result.models[chosen_index]``.
    """
    index, no_candidate = choose_candidate(
        result.baseline_accuracy, result.val_accuracies, slack_percent
    )
    return replace(result, chosen_index=index, no_candidate=no_candidate)
