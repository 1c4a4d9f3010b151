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

Module: tests/unit/test_cli_output_service.py

CLI Output Service Unit Tests

Validates the gap markers, the metrics response notes and that the rich
tables render the numbers they are given.

Version: 0.1.0
License: Apache 2.0
"""

import pytest
from rich.console import Console

from cleverprune.application.dto.metrics_response import MetricsResponse
from cleverprune.cli import cli_output_service
from cleverprune.cli.cli_output_service import render_metrics, render_selection, style_for_gap
from cleverprune.domain.entities.metrics_report import MetricsReport
from cleverprune.infrastructure.hypersearch.selection import SelectionResult

__version__ = "0.1.0"


@pytest.fixture
def recording_console(monkeypatch):
    console = Console(record=True, width=160)
    monkeypatch.setattr(cli_output_service, "console", console)
    return console


@pytest.mark.parametrize(
    "gap, marker, color",
    [(0.27, "[-]", "red"), (0.03, "[~]", "yellow"), (0.005, "[+]", "green"), (-0.01, "[+]", "green")],
)
def test_style_for_gap(gap, marker, color):
    """Test the console marker for a clean-minus-poisoned gap.

    Validates:
        - Gaps above five points are flagged red
        - Gaps of at most one point are green
        - Anything between is yellow
    """
    found_marker, style = style_for_gap(gap)
    assert found_marker == marker
    assert style.color.name == color


def test_metrics_response_notes():
    clever_hans = MetricsResponse.from_domain(MetricsReport(0.97, 0.70), "original")
    assert clever_hans.notes == ["Poisoned accuracy is 27.0 points below clean accuracy."]

    fixed = MetricsResponse.from_domain(
        MetricsReport(0.95, 0.94), "egem", strength=0.2, slack=5.0, n_refine=50, no_candidate=True
    )
    assert fixed.notes[0] == "The artifact has little effect on accuracy."
    assert "weakest" in fixed.notes[1]


def test_metrics_response_row():
    response = MetricsResponse.from_domain(
        MetricsReport(0.9, 0.8, recall_by_group={"small": 0.5}, run_seed=4),
        "rgem",
        strength=10.0,
        slack=2.0,
        n_refine=25,
    )
    row = response.to_row(artifact="blur")
    assert row["run_seed"] == 4
    assert row["alpha_or_lambda"] == 10.0
    assert row["recall_small"] == 0.5
    assert row["recall_thick"] is None
    assert row["artifact"] == "blur"
    assert response.recall("small") == 0.5


def test_render_metrics_prints_every_method(recording_console):
    responses = [
        MetricsResponse.from_domain(MetricsReport(0.97, 0.70), "original"),
        MetricsResponse.from_domain(MetricsReport(0.96, 0.95), "pca-egem", strength=0.1),
    ]
    render_metrics(responses, title="Evaluation")
    text = recording_console.export_text()

    assert "original" in text and "pca-egem" in text
    assert "97.0" in text and "27.0" in text


def test_render_selection_marks_the_chosen_candidate(recording_console):
    selection = SelectionResult(
        candidates=[1.0, 0.5, 0.1],
        val_accuracies=[0.9, 0.88, 0.7],
        baseline_accuracy=0.9,
        chosen_index=1,
    )
    render_selection(selection, "egem")
    text = recording_console.export_text()

    assert "chosen" in text
    assert "88.0" in text
    assert "Original model validation accuracy: 90.0%" in text
