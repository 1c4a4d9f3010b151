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

Module: src/cleverprune/application/dto/metrics_response.py
DTO: MetricsResponse for the CLI and report layers

Flattens a domain MetricsReport together with the refinement that produced
the model into one record: a metrics CSV row for the report writer and a
row of the rich results table for the console.

Version: 0.1.0
License: Apache 2.0
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from cleverprune.domain.entities.metrics_report import MetricsReport
from cleverprune.infrastructure.reports import report_row

__version__ = "0.1.0"

CLEVER_HANS_GAP = 0.05


@dataclass
class MetricsResponse:
    """Evaluation of one (possibly refined) model on one run.

    Attributes:
        method (str): Refinement method, ``original`` for the trained model.
        strength (float): Chosen alpha, lambda or epoch count.
        slack (float): Slack used for the choice, in points.
        n_refine (int): Refinement samples per class.
        report (MetricsReport): Accuracies and diagnostics.
        no_candidate (bool): The slack rule found no qualifying candidate.
        notes (List[str]): Human-readable observations for the console.
    """

    method: str
    strength: float
    slack: float
    n_refine: int
    report: MetricsReport
    no_candidate: bool = False
    notes: List[str] = field(default_factory=list)

    @classmethod
    def from_domain(
        cls,
        report: MetricsReport,
        method: str,
        strength: float = 0.0,
        slack: float = 0.0,
        n_refine: int = 0,
        no_candidate: bool = False,
    ) -> "MetricsResponse":
        """Wrap a MetricsReport with the refinement settings that produced it.

        Example:
            >>> report = MetricsReport(accuracy_clean=0.97, accuracy_poisoned=0.70)
            >>> MetricsResponse.from_domain(report, "original").notes[0]
            'Poisoned accuracy is 27.0 points below clean accuracy.'
        """
        return cls(
            method=method,
            strength=float(strength),
            slack=float(slack),
            n_refine=int(n_refine),
            report=report,
            no_candidate=no_candidate,
            notes=cls._generate_notes(report, no_candidate),
        )

    @property
    def gap(self) -> float:
        return self.report.gap

    def to_row(self, **extra: Any) -> Dict[str, Any]:
        """Metrics CSV row in the fixed column order."""
        return report_row(
            self.report, self.method, self.strength, self.slack, self.n_refine, **extra
        )

    def recall(self, tag: str) -> Optional[float]:
        return self.report.recall_by_group.get(tag)

    @staticmethod
    def _generate_notes(report: MetricsReport, no_candidate: bool) -> List[str]:
        notes = []
        if report.gap > CLEVER_HANS_GAP:
            notes.append(
                f"Poisoned accuracy is {100 * report.gap:.1f} points below clean accuracy."
            )
        else:
            notes.append("The artifact has little effect on accuracy.")
        if no_candidate:
            notes.append("No candidate met the slack; the weakest one was used.")
        return notes
