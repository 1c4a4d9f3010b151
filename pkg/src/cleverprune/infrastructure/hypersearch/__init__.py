"""
Module: src/cleverprune/infrastructure/hypersearch/__init__.py

Hyper-parameter machinery: per-layer thresholds, lambda search and
slack-based selection.

Version: 0.1.0
License: Apache 2.0
"""

from cleverprune.infrastructure.hypersearch.schedule import (
    moment_mean_factor,
    solve_lambda,
    triangular_thresholds,
)
from cleverprune.infrastructure.hypersearch.selection import (
    SelectionResult,
    choose_candidate,
    reselect,
    score_candidates,
    select_by_slack,
    split_indices,
)

__all__ = [
    "SelectionResult",
    "choose_candidate",
    "moment_mean_factor",
    "reselect",
    "score_candidates",
    "select_by_slack",
    "solve_lambda",
    "split_indices",
    "triangular_thresholds",
]
