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

Module: src/cleverprune/application/use_cases/evaluate_use_case.py

Evaluate Use Case

Scores the trained model, and the refined model of the configured method
when ``refine`` has produced one, on the stored clean and fully poisoned
test sets. Writes one metrics row per model; for a refined model it also
records how far its logits moved away from the trained model.

Version: 0.1.0
License: Apache 2.0
"""

import json
import logging
from pathlib import Path
from typing import List

import pandas as pd

from cleverprune.application.dto.experiment_config import ExperimentConfig
from cleverprune.application.dto.metrics_response import MetricsResponse
from cleverprune.application.use_cases.run_directory import RunDirectory
from cleverprune.infrastructure import model_store
from cleverprune.infrastructure.chbench.dataset_store import load_dataset
from cleverprune.infrastructure.chbench.metrics import evaluate, logit_shift
from cleverprune.infrastructure.reports import write_frame, write_report

__version__ = "0.1.0"

logger = logging.getLogger(__name__)


class EvaluateUseCase:
    """Use case for Clever-Hans evaluation of stored models."""

    def execute(self, config: ExperimentConfig) -> List[MetricsResponse]:
        """Evaluate the run directory's models and write ``metrics.csv``.

        The reference model is ``config.model_path`` when set, otherwise the
        trained model of the directory.

        Returns:
            List[MetricsResponse]: The reference model first, then the
                refined model if present.

        Raises:
            ConfigError: If the model or a test set is missing.
        """
        out = RunDirectory(config.output_dir)
        reference_path = Path(config.model_path) if config.model_path else out.model
        reference = model_store.load(out.require(reference_path))
        clean = load_dataset(out.require(out.clean_test))
        poisoned = load_dataset(out.require(out.poisoned_test))
        positive = config.dataset.target_class

        responses = [
            MetricsResponse.from_domain(
                evaluate(reference, clean, poisoned, positive, config.seed), "original"
            )
        ]

        refined_path = out.refined(config.method)
        if config.method != "original" and refined_path.exists():
            refined = model_store.load(refined_path)
            report = evaluate(refined, clean, poisoned, positive, config.seed)
            plan = self._read_plan(out.plan(config.method))
            responses.append(
                MetricsResponse.from_domain(
                    report,
                    config.method,
                    strength=plan.get("strength", 0.0),
                    slack=plan.get("slack", config.slack),
                    n_refine=plan.get("n_refine", config.n_refine),
                    no_candidate=plan.get("no_candidate", False),
                )
            )
            shift = logit_shift(reference, refined, clean, poisoned)
            report.logit_shift.update(shift)
            write_frame(
                pd.DataFrame([{"run_seed": config.seed, "method": config.method, **shift}]),
                out.logit_shift,
            )
        elif config.method != "original":
            logger.warning(f"No refined model at {refined_path}; evaluating the original only")

        write_report([r.to_row() for r in responses], out.metrics)
        logger.info(f"Wrote {len(responses)} metrics rows to {out.metrics}")
        return responses

    @staticmethod
    def _read_plan(path: Path) -> dict:
        if not path.exists():
            return {}
        return json.loads(path.read_text())
