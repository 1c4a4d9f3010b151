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

Module: src/cleverprune/application/use_cases/sweep_use_case.py

Sweep Use Case

Repeats the train/refine/evaluate pipeline over seeded runs and one
experimental axis:

    slack       tolerated validation accuracy drop (one set of candidate
                refits per run and method, re-selected for every slack)
    samples     refinement samples per class
    artifacts   artifact type; also records the artifact footprint
                sparsity and clean/poisoned separability of the trained
                model at every refinable site

Runs are independent and may execute on worker threads. Rows are written
in (setting, run, method) order whatever order the runs finish in, so a
sweep's CSV bytes depend only on the configuration.

Version: 0.1.0
License: Apache 2.0
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Tuple

import pandas as pd

from cleverprune.application.dto.experiment_config import ExperimentConfig
from cleverprune.application.dto.metrics_response import MetricsResponse
from cleverprune.application.use_cases.run_directory import RunDirectory
from cleverprune.domain.errors import ConfigError
from cleverprune.domain.services.benchmark_service import BenchmarkRun, BenchmarkService
from cleverprune.domain.services.refinement_service import (
    RefinementOutcome,
    RefinementService,
)
from cleverprune.domain.value_objects.artifact_spec import artifact_from_name
from cleverprune.infrastructure.reports import per_site_frame, write_frame, write_report

__version__ = "0.1.0"

logger = logging.getLogger(__name__)

SWEEP_KINDS = ("slack", "samples", "artifacts")

# (setting index, method index, CSV row)
SweepRow = Tuple[int, int, Dict[str, Any]]


@dataclass
class RunResult:
    """Rows produced by one seeded run of a sweep."""

    rows: List[SweepRow] = field(default_factory=list)
    sparsity: List[Tuple[int, pd.DataFrame]] = field(default_factory=list)
    separability: List[Tuple[int, pd.DataFrame]] = field(default_factory=list)


@dataclass
class SweepOutcome:
    """Written files and the ordered metrics rows of a sweep."""

    kind: str
    path: Path
    rows: List[Dict[str, Any]]
    diagnostics: Dict[str, Path] = field(default_factory=dict)


def _ordered_frames(parts: List[List[Tuple[int, pd.DataFrame]]]) -> pd.DataFrame:
    keyed = [
        (setting, run_index, frame)
        for run_index, run_parts in enumerate(parts)
        for setting, frame in run_parts
    ]
    keyed.sort(key=lambda item: item[:2])
    return pd.concat([frame for _, _, frame in keyed], ignore_index=True)


class SweepUseCase:
    """Use case for the slack, sample-count and artifact-type sweeps.

    Attributes:
        threads (int): Runs executed concurrently.
    """

    def __init__(self, threads: int = 1):
        self.threads = max(1, threads)

    def execute(self, config: ExperimentConfig, kind: str) -> SweepOutcome:
        """Run sweep ``kind`` over ``config.runs`` seeds and write its CSVs.

        Args:
            config (ExperimentConfig): Experiment with the sweep grids.
            kind (str): ``slack``, ``samples`` or ``artifacts``.

        Returns:
            SweepOutcome: Metrics rows in (setting, run, method) order and
                the paths written.

        Raises:
            ConfigError: If ``kind`` is not a known sweep.
        """
        workers: Dict[str, Callable[[ExperimentConfig, int], RunResult]] = {
            "slack": self._slack_run,
            "samples": self._samples_run,
            "artifacts": self._artifacts_run,
        }
        if kind not in workers:
            raise ConfigError(f"Unknown sweep '{kind}' (expected one of {', '.join(SWEEP_KINDS)})")
        worker = workers[kind]
        seeds = config.run_seeds()
        logger.info(f"Sweep {kind}: {len(seeds)} runs on {self.threads} thread(s)")

        if self.threads > 1 and len(seeds) > 1:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                results = list(pool.map(lambda seed: worker(config, seed), seeds))
        else:
            results = [worker(config, seed) for seed in seeds]

        keyed = [
            (setting, run_index, method, row)
            for run_index, result in enumerate(results)
            for setting, method, row in result.rows
        ]
        keyed.sort(key=lambda item: item[:3])
        rows = [row for *_, row in keyed]

        out = RunDirectory(config.output_dir)
        outcome = SweepOutcome(kind=kind, path=write_report(rows, out.sweep(kind)), rows=rows)
        if kind == "artifacts":
            for name in ("sparsity", "separability"):
                frame = _ordered_frames([getattr(r, name) for r in results])
                outcome.diagnostics[name] = write_frame(frame, out.diagnostic(name))
        logger.info(f"Sweep {kind}: wrote {len(rows)} rows to {outcome.path}")
        return outcome

    def _slack_run(self, config: ExperimentConfig, seed: int) -> RunResult:
        bench, run, service = self._prepare(config, seed, BenchmarkService(config.benchmark_setup()))
        data = service.refinement_set(run.model, run.available, config.n_refine, seed)
        result = RunResult()
        for m_index, method in enumerate(config.sweep_methods()):
            outcomes = service.refine_for_slacks(
                run.model, data, method, config.sweep.slack_grid, seed=seed
            )
            for s_index, outcome in enumerate(outcomes):
                result.rows.append(
                    (s_index, m_index, self._row(bench, run, outcome, config.n_refine))
                )
        return result

    def _samples_run(self, config: ExperimentConfig, seed: int) -> RunResult:
        bench, run, service = self._prepare(config, seed, BenchmarkService(config.benchmark_setup()))
        result = RunResult()
        for s_index, n_refine in enumerate(config.sweep.sample_grid):
            data = service.refinement_set(run.model, run.available, n_refine, seed)
            for m_index, method in enumerate(config.sweep_methods()):
                outcome = service.refine(run.model, data, method, config.slack, seed=seed)
                result.rows.append((s_index, m_index, self._row(bench, run, outcome, n_refine)))
        return result

    def _artifacts_run(self, config: ExperimentConfig, seed: int) -> RunResult:
        result = RunResult()
        for a_index, kind in enumerate(config.sweep.artifacts):
            setup = config.benchmark_setup(artifact_from_name(kind))
            bench, run, service = self._prepare(config, seed, BenchmarkService(setup))
            data = service.refinement_set(run.model, run.available, config.n_refine, seed)
            for m_index, method in enumerate(config.sweep_methods()):
                outcome = service.refine(run.model, data, method, config.slack, seed=seed)
                row = self._row(bench, run, outcome, config.n_refine, artifact=kind)
                result.rows.append((a_index, m_index, row))

            footprint, separability = bench.diagnostics(run.model, run)
            key = {"run_seed": seed, "artifact": kind}
            result.sparsity.append((a_index, per_site_frame(footprint, "sparsity", **key)))
            result.separability.append(
                (a_index, per_site_frame(separability, "separability_r2", **key))
            )
        return result

    @staticmethod
    def _prepare(
        config: ExperimentConfig, seed: int, bench: BenchmarkService
    ) -> Tuple[BenchmarkService, BenchmarkRun, RefinementService]:
        run = bench.prepare(seed)
        return bench, run, RefinementService(config.refiner_options(seed), threads=1)

    @staticmethod
    def _row(
        bench: BenchmarkService,
        run: BenchmarkRun,
        outcome: RefinementOutcome,
        n_refine: int,
        **extra: Any,
    ) -> Dict[str, Any]:
        response = MetricsResponse.from_domain(
            bench.evaluate(outcome.model, run),
            outcome.method,
            strength=outcome.strength,
            slack=outcome.slack,
            n_refine=n_refine,
            no_candidate=outcome.selection.no_candidate,
        )
        return response.to_row(**extra)
