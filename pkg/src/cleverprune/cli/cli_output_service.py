"""
Module: src/cleverprune/cli/cli_output_service.py

cleverprune CLI Output Rendering Service

Rich tables for evaluation results and selection traces. The numbers shown
are the ones written to the CSV files; the console only adds colour.

Version: 0.1.0
License: Apache 2.0
"""

from typing import List, Optional

from rich import box
from rich.console import Console
from rich.style import Style
from rich.table import Table

from cleverprune.application.dto.metrics_response import CLEVER_HANS_GAP, MetricsResponse
from cleverprune.domain.entities.dataset import GROUP_TAGS
from cleverprune.infrastructure.hypersearch.selection import SelectionResult

__version__ = "0.1.0"

console = Console()


def style_for_gap(gap: float) -> tuple[str, Style]:
    """Text marker and style for a clean-minus-poisoned accuracy gap.

    ``[-]`` flags a gap above five points (the model still relies on the
    artifact), ``[+]`` a gap of at most one point, ``[~]`` anything between.
    """
    if gap > CLEVER_HANS_GAP:
        return "[-]", Style(color="red", bold=True)
    if gap <= 0.01:
        return "[+]", Style(color="green", bold=True)
    return "[~]", Style(color="yellow", bold=True)


def _percent(value: Optional[float]) -> str:
    return "n/a" if value is None else f"{100 * value:.1f}"


def render_metrics(responses: List[MetricsResponse], title: Optional[str] = None):
    """Table of clean/poisoned accuracy, gap and per-group recall per model."""
    table = Table(
        title=title, show_lines=False, box=box.SIMPLE_HEAVY, row_styles=["none", "dim"]
    )
    table.add_column("Method", style="cyan", no_wrap=True)
    table.add_column("Strength", justify="right")
    table.add_column("Clean %", justify="right")
    table.add_column("Poisoned %", justify="right")
    table.add_column("Gap", justify="right")
    for tag in GROUP_TAGS:
        table.add_column(f"Recall {tag} %", justify="right")

    for response in responses:
        marker, style = style_for_gap(response.gap)
        table.add_row(
            response.method,
            f"{response.strength:g}",
            _percent(response.report.accuracy_clean),
            _percent(response.report.accuracy_poisoned),
            f"[{style}]{marker} {100 * response.gap:.1f}[/]",
            *(_percent(response.recall(tag)) for tag in GROUP_TAGS),
        )
    console.print(table)
    for response in responses:
        for note in response.notes:
            console.print(f"[dim]* {response.method}: {note}[/dim]")


def render_selection(selection: SelectionResult, method: str):
    """Validation accuracy of every candidate, chosen row highlighted."""
    table = Table(title=f"{method} candidates", box=box.SIMPLE_HEAVY)
    table.add_column("Candidate", justify="right")
    table.add_column("Val accuracy %", justify="right")
    table.add_column("", justify="center")
    for index, (candidate, score) in enumerate(
        zip(selection.candidates, selection.val_accuracies)
    ):
        chosen = index == selection.chosen_index
        table.add_row(
            f"{candidate:g}",
            _percent(score),
            "[bold green]chosen[/]" if chosen else "",
            style="bold" if chosen else None,
        )
    console.print(table)
    console.print(
        f"[dim]Original model validation accuracy: {_percent(selection.baseline_accuracy)}%[/dim]"
    )
