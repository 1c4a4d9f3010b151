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

Module: tests/application/test_use_cases.py

Application Layer Use Case Tests

Runs the train, refine, evaluate, explain and sweep use cases on a tiny
three-class benchmark and checks the files they leave in the run
directory. One trained run directory is shared by the whole module.

Version: 0.1.0
License: Apache 2.0
"""

import json

import pandas as pd
import pytest

from cleverprune.application.dto.experiment_config import ExperimentConfig
from cleverprune.application.use_cases.evaluate_use_case import EvaluateUseCase
from cleverprune.application.use_cases.explain_use_case import ExplainUseCase
from cleverprune.application.use_cases.refine_use_case import RefineUseCase
from cleverprune.application.use_cases.run_directory import RunDirectory
from cleverprune.application.use_cases.sweep_use_case import SweepUseCase
from cleverprune.application.use_cases.train_use_case import TrainUseCase
from cleverprune.domain.errors import ConfigError
from cleverprune.domain.value_objects.schedule import default_grid
from cleverprune.infrastructure import model_store
from cleverprune.infrastructure.reports import REPORT_COLUMNS, read_report

__version__ = "0.1.0"


@pytest.fixture(scope="module")
def trained(tmp_path_factory, tiny_experiment):
    out = tmp_path_factory.mktemp("run")
    config = ExperimentConfig.model_validate(tiny_experiment(output_dir=str(out)))
    outcome = TrainUseCase().execute(config)
    return config, outcome


def test_train_writes_the_run_directory(trained):
    """Test the files and metrics produced by training.

    Validates:
        - Model, available pool and both test sets are stored
        - The training log has one row per epoch
        - The reported accuracies are fractions
    """
    config, outcome = trained
    out = RunDirectory(config.output_dir)

    for path in (out.model, out.available, out.clean_test, out.poisoned_test):
        assert path.exists()
    log = pd.read_csv(outcome.training_log_path)
    assert list(log.columns) == ["epoch", "loss"]
    assert len(log) == config.training.epochs
    assert outcome.model_path == out.model
    report = outcome.response.report
    assert 0.0 <= report.accuracy_poisoned <= 1.0
    assert 0.0 <= report.accuracy_clean <= 1.0


def test_refine_original_keeps_the_model(trained):
    config, _ = trained
    out = RunDirectory(config.output_dir)
    outcome = RefineUseCase().execute(config.model_copy(update={"method": "original"}))

    assert outcome.strength == 0.0
    assert out.refined("original").read_bytes() == out.model.read_bytes()


def test_refine_egem_writes_plan_and_selection_trace(trained):
    config, _ = trained
    out = RunDirectory(config.output_dir)
    outcome = RefineUseCase(threads=2).execute(config)

    plan = json.loads(out.plan("egem").read_text())
    assert plan["method"] == "egem"
    assert plan["slack"] == config.slack
    assert plan["n_refine"] == config.n_refine

    trace = pd.read_csv(out.selection_trace("egem"))
    assert len(trace) == len(default_grid("egem"))
    assert trace["chosen"].sum() == 1
    assert trace.loc[trace["chosen"], "candidate"].iloc[0] == pytest.approx(outcome.strength)

    reloaded = model_store.load(out.refined("egem"))
    assert reloaded.refinable_sites == outcome.model.refinable_sites


def test_evaluate_reports_original_and_refined(trained):
    config, _ = trained
    RefineUseCase().execute(config)
    responses = EvaluateUseCase().execute(config)
    out = RunDirectory(config.output_dir)

    assert [r.method for r in responses] == ["original", "egem"]
    frame = read_report(out.metrics)
    assert list(frame.columns[: len(REPORT_COLUMNS)]) == REPORT_COLUMNS
    assert list(frame["method"]) == ["original", "egem"]
    shift = pd.read_csv(out.logit_shift)
    assert shift.loc[0, "method"] == "egem"


def test_explain_covers_input_and_refinable_sites(trained):
    config, _ = trained
    relevance = ExplainUseCase().execute(config)
    model = model_store.load(RunDirectory(config.output_dir).model)

    assert set(relevance.layers) == {-1, *model.refinable_sites}
    frame = pd.read_csv(RunDirectory(config.output_dir).relevance)
    assert list(frame.columns) == ["layer", "unit", "R"]


def test_explain_rejects_sample_index_out_of_range(trained):
    config, _ = trained
    far = config.explain.model_copy(update={"sample_index": 10_000})
    with pytest.raises(ConfigError):
        ExplainUseCase().execute(config.model_copy(update={"explain": far}))


@pytest.mark.parametrize("layer", [0, 10_000])
def test_explain_rejects_a_layer_it_does_not_explain(trained, layer):
    config, _ = trained
    request = config.explain.model_copy(update={"method": "gi", "layer": layer})
    with pytest.raises(ConfigError):
        ExplainUseCase().execute(config.model_copy(update={"explain": request}))


def test_lrp_explains_any_layer(trained):
    config, _ = trained
    request = config.explain.model_copy(update={"method": "lrp", "layer": 0})
    ExplainUseCase().execute(config.model_copy(update={"explain": request}))

    frame = pd.read_csv(RunDirectory(config.output_dir).relevance)
    assert len(frame) > 0
    assert set(frame["layer"]) == {0}


def test_refine_without_training_is_a_config_error(tmp_path, tiny_experiment):
    config = ExperimentConfig.model_validate(tiny_experiment(output_dir=str(tmp_path)))
    with pytest.raises(ConfigError):
        RefineUseCase().execute(config)
    with pytest.raises(ConfigError):
        EvaluateUseCase().execute(config)


def test_slack_sweep_rows_follow_setting_then_method(tmp_path, tiny_experiment):
    """Test the row layout of a slack sweep over several methods.

    Validates:
        - One row per (slack, method) when ``sweep.methods`` is set
        - Rows are ordered by slack first, then by method
        - The CSV on disk matches the returned rows
    """
    config = ExperimentConfig.model_validate(tiny_experiment(output_dir=str(tmp_path)))
    outcome = SweepUseCase().execute(config, "slack")

    assert [row["method"] for row in outcome.rows] == ["original", "egem"] * 2
    assert [row["slack"] for row in outcome.rows] == [0.0, 0.0, 5.0, 5.0]
    frame = read_report(outcome.path)
    assert len(frame) == 4
    assert outcome.diagnostics == {}


def test_default_slack_sweep_writes_one_row_per_run_and_setting(tmp_path, tiny_experiment):
    """Test the default slack sweep layout.

    Validates:
        - Without ``sweep.methods`` only the configured method is swept
        - Six default slacks over two runs give exactly twelve rows
        - Rows are ordered by slack, then by run seed
    """
    data = tiny_experiment(output_dir=str(tmp_path), runs=2, method="original")
    data["sweep"] = {}
    config = ExperimentConfig.model_validate(data)
    assert config.sweep_methods() == ["original"]

    outcome = SweepUseCase().execute(config, "slack")

    assert len(outcome.rows) == 6 * config.runs
    assert {row["method"] for row in outcome.rows} == {"original"}
    assert [row["slack"] for row in outcome.rows] == [
        s for s in [0.0, 1.0, 2.0, 5.0, 10.0, 20.0] for _ in range(2)
    ]
    assert [row["run_seed"] for row in outcome.rows] == [3, 4] * 6
    assert len(read_report(outcome.path)) == 12


def test_artifact_sweep_writes_diagnostics(tmp_path, tiny_experiment):
    data = tiny_experiment(output_dir=str(tmp_path))
    data["sweep"]["methods"] = ["original"]
    config = ExperimentConfig.model_validate(data)
    outcome = SweepUseCase().execute(config, "artifacts")

    assert [row["artifact"] for row in outcome.rows] == ["corner", "blur"]
    assert set(outcome.diagnostics) == {"sparsity", "separability"}
    separability = pd.read_csv(outcome.diagnostics["separability"])
    assert list(separability["artifact"].unique()) == ["corner", "blur"]


def test_unknown_sweep_kind(tmp_path, tiny_experiment):
    config = ExperimentConfig.model_validate(tiny_experiment(output_dir=str(tmp_path)))
    with pytest.raises(ConfigError):
        SweepUseCase().execute(config, "epochs")
