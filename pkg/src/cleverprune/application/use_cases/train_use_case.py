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

Module: src/cleverprune/application/use_cases/train_use_case.py

Train Use Case

Trains the Clever-Hans model of one seeded benchmark run and stores
everything later commands need: the model, the per-epoch training loss,
the clean available pool and both test sets.

Version: 0.1.0
License: Apache 2.0
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import pandas as pd

from cleverprune.application.dto.experiment_config import ExperimentConfig
from cleverprune.application.dto.metrics_response import MetricsResponse
from cleverprune.application.use_cases.run_directory import RunDirectory
from cleverprune.domain.services.benchmark_service import BenchmarkService
from cleverprune.infrastructure import model_store
from cleverprune.infrastructure.chbench.dataset_store import save_dataset
from cleverprune.infrastructure.reports import write_frame

__version__ = "0.1.0"

logger = logging.getLogger(__name__)


@dataclass
class TrainOutcome:
    """Where the model went and how it scores on the test sets."""

    model_path: Path
    training_log_path: Path
    response: MetricsResponse


class TrainUseCase:
    """Use case for training a model on artifact-contaminated data.

    Attributes:
        service (BenchmarkService): Builds the run; configured from the
            experiment unless injected.
    """

    def __init__(self, service: Optional[BenchmarkService] = None):
        self.service = service

    def execute(self, config: ExperimentConfig) -> TrainOutcome:
        """Generate the run data, train, and write the run directory.

        Args:
            config (ExperimentConfig): Experiment with seed and output directory.

        Returns:
            TrainOutcome: Paths of the model and the training log, plus the
                trained model's clean and poisoned test accuracy.

        Example:
            >>> outcome = TrainUseCase().execute(config)
            >>> outcome.response.report.accuracy_clean
            0.97
        """
        service = self.service or BenchmarkService(config.benchmark_setup())
        out = RunDirectory(config.output_dir)
        run = service.prepare(config.seed)

        model_store.save(run.model, out.model)
        save_dataset(run.available, out.available)
        save_dataset(run.clean_test, out.clean_test)
        save_dataset(run.poisoned_test, out.poisoned_test)
        losses = run.training_log.epoch_losses
        write_frame(
            pd.DataFrame({"epoch": range(1, len(losses) + 1), "loss": losses}),
            out.training_log,
        )

        report = service.evaluate(run.model, run)
        logger.info(
            f"Trained model: clean accuracy {report.accuracy_clean:.4f}, "
            f"poisoned accuracy {report.accuracy_poisoned:.4f}"
        )
        return TrainOutcome(
            model_path=out.model,
            training_log_path=out.training_log,
            response=MetricsResponse.from_domain(report, "original"),
        )
