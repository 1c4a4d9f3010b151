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

Module: src/cleverprune/application/use_cases/refine_use_case.py

Refine Use Case

Loads a trained model and the clean available pool from the run
directory, draws the refinement set, refines with the configured method
and writes the refined model, the selection trace and the chosen plan.

Version: 0.1.0
License: Apache 2.0
"""

import json
import logging
from pathlib import Path
from typing import Optional

from cleverprune.application.dto.experiment_config import ExperimentConfig
from cleverprune.application.use_cases.run_directory import RunDirectory
from cleverprune.domain.services.refinement_service import (
    RefinementOutcome,
    RefinementService,
)
from cleverprune.infrastructure import model_store
from cleverprune.infrastructure.chbench.dataset_store import load_dataset
from cleverprune.infrastructure.reports import write_frame

__version__ = "0.1.0"

logger = logging.getLogger(__name__)


class RefineUseCase:
    """Use case for removing Clever-Hans behaviour from a trained model.

    Attributes:
        threads (int): Candidate refits evaluated concurrently.
    """

    def __init__(self, threads: int = 1, service: Optional[RefinementService] = None):
        self.threads = threads
        self.service = service

    def execute(self, config: ExperimentConfig) -> RefinementOutcome:
        """Refine the model of the run directory with ``config.method``.

        The model comes from ``config.model_path`` when set, otherwise from
        the directory written by ``train``.

        Returns:
            RefinementOutcome: Chosen plan, refined model and selection table.

        Raises:
            ConfigError: If the model or the available data is missing.
        """
        out = RunDirectory(config.output_dir)
        model_path = out.require(Path(config.model_path) if config.model_path else out.model)
        model = model_store.load(model_path)
        available = load_dataset(out.require(out.available))

        service = self.service or RefinementService(config.refiner_options(), self.threads)
        refinement_set = service.refinement_set(model, available, config.n_refine, config.seed)
        outcome = service.refine(
            model,
            refinement_set,
            config.method,
            slack=config.slack,
            grid=config.grid,
            seed=config.seed,
        )

        model_store.save(outcome.model, out.refined(config.method))
        write_frame(outcome.selection.trace(), out.selection_trace(config.method))
        plan = {
            **outcome.plan.to_dict(),
            "slack": outcome.slack,
            "n_refine": config.n_refine,
            "no_candidate": outcome.selection.no_candidate,
        }
        out.plan(config.method).write_text(json.dumps(plan, sort_keys=True, indent=2))
        logger.info(
            f"Refined with {config.method} at strength {outcome.strength:g}; "
            f"wrote {out.refined(config.method)}"
        )
        return outcome
