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

Module: src/cleverprune/domain/services/refinement_service.py

Refinement Service

Domain service that turns a trained model plus a pool of clean available
data into a refined model. It draws the refinement set (correctly
predicted samples only, a fixed number per class), resolves the refiner
for the requested method from the registry and tunes its strength with
the slack rule.

Key Features:
    - One entry point for every refinement method
    - Refinement-set selection seeded per run and per set size
    - Slack sweeps that reuse a single set of candidate refits

Version: 0.1.0
License: Apache 2.0
"""

import logging
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence

from cleverprune.domain.entities.dataset import Dataset
from cleverprune.domain.entities.model import Model
from cleverprune.domain.value_objects.refinement_plan import RefinementPlan
from cleverprune.domain.value_objects.schedule import DEFAULT_SLACK, SelectionConfig
from cleverprune.domain.value_objects.tensor import SeededRng
from cleverprune.infrastructure.chbench.poisoning import select_refinement_set
from cleverprune.infrastructure.hypersearch.selection import (
    SelectionResult,
    reselect,
    select_by_slack,
)
from cleverprune.infrastructure.refiners import get_refiner
from cleverprune.infrastructure.refiners.base import RefinerOptions

__version__ = "0.1.0"

logger = logging.getLogger(__name__)


@dataclass
class RefinementOutcome:
    """A refined model together with how it was chosen.

    Attributes:
        method (str): Refinement method name.
        plan (RefinementPlan): The selected plan.
        model (Model): The refined model.
        selection (SelectionResult): Candidate table of the slack rule.
        slack (float): Slack the selection used, in percentage points.
    """

    method: str
    plan: RefinementPlan
    model: Model
    selection: SelectionResult
    slack: float

    @property
    def strength(self) -> float:
        return self.selection.chosen_value


class RefinementService:
    """Refine trained models with any registered method.

    The service does not hold models or data; every call is independent,
    so one instance can serve several runs of a sweep.

    Attributes:
        options (RefinerOptions): Fixed method knobs (message factors,
            weight-space pruning, fine-tuning step size).
        threads (int): Candidate refits evaluated concurrently.
    """

    def __init__(self, options: Optional[RefinerOptions] = None, threads: int = 1):
        self.options = options or RefinerOptions()
        self.threads = max(1, threads)

    def refinement_set(
        self, model: Model, available: Dataset, n_per_class: int, seed: int
    ) -> Dataset:
        """Draw ``n_per_class`` correctly predicted samples of every class.

        Args:
            model (Model): The model to be refined.
            available (Dataset): Clean pool to draw from.
            n_per_class (int): Samples per class.
            seed (int): Run seed; combined with ``n_per_class`` so different
                set sizes are independent draws.

        Returns:
            Dataset: The refinement set.
        """
        rng = SeededRng(seed).child("refinement-set", n_per_class)
        return select_refinement_set(model, available, n_per_class, rng)

    def refine(
        self,
        model: Model,
        data: Dataset,
        method: str,
        slack: float = DEFAULT_SLACK,
        grid: Optional[Sequence[float]] = None,
        seed: int = 0,
    ) -> RefinementOutcome:
        """Refine ``model`` on ``data`` with the strongest admissible strength.

        Args:
            model (Model): The original model; left untouched.
            data (Dataset): Refinement set.
            method (str): Registered method name.
            slack (float): Tolerated validation accuracy drop in points.
            grid (Optional[Sequence[float]]): Candidate override, weakest
                first; defaults to the method's grid.
            seed (int): Seed of the refit/validation split and fine-tuning.

        Returns:
            RefinementOutcome: Plan, model and selection table.

        Raises:
            DomainValueError: On an unknown method or a dataset too small to split.
        """
        return self.refine_for_slacks(model, data, method, [slack], grid, seed)[0]

    def refine_for_slacks(
        self,
        model: Model,
        data: Dataset,
        method: str,
        slacks: Sequence[float],
        grid: Optional[Sequence[float]] = None,
        seed: int = 0,
    ) -> List[RefinementOutcome]:
        """Like ``refine`` for several slacks, refitting every candidate once."""
        refiner = get_refiner(method, self._options_for(seed))
        candidates = tuple(refiner.grid if grid is None else grid)
        config = SelectionConfig(
            slack_percent=slacks[0], candidate_grid=candidates, seed=seed
        )
        logger.debug(f"Refining with {method} over {len(candidates)} candidates")
        _, _, first = select_by_slack(model, refiner, data, config, threads=self.threads)

        outcomes = []
        for slack in slacks:
            selection = reselect(first, slack)
            index = selection.chosen_index
            outcomes.append(
                RefinementOutcome(
                    method=method,
                    plan=selection.plans[index],
                    model=selection.models[index],
                    selection=selection,
                    slack=float(slack),
                )
            )
        return outcomes

    def _options_for(self, seed: int) -> RefinerOptions:
        return replace(self.options, seed=seed)
