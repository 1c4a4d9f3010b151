"""
Module: src/cleverprune/domain/entities/__init__.py

Models, layers, datasets, activation statistics, relevance maps and
evaluation reports.
"""

from cleverprune.domain.entities.activation_stats import ActivationStats, PcaBasis, SiteStats
from cleverprune.domain.entities.dataset import Dataset
from cleverprune.domain.entities.metrics_report import MetricsReport
from cleverprune.domain.entities.model import ActivationTrace, Model
from cleverprune.domain.entities.relevance import MessageFactors, RelevanceMap

__all__ = [
    "ActivationStats",
    "ActivationTrace",
    "Dataset",
    "MessageFactors",
    "MetricsReport",
    "Model",
    "PcaBasis",
    "RelevanceMap",
    "SiteStats",
]
