"""
Module: src/cleverprune/infrastructure/refiners/base.py

Refiner interface shared by all refinement methods.

A refiner turns an original model, the available data and one grid value
into a refined copy of the model and the plan describing what was done.
Refiners are resolved by method name through the registry in
``cleverprune.infrastructure.refiners``.

Version: 0.1.0
License: Apache 2.0
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from cleverprune.domain.entities.dataset import Dataset
from cleverprune.domain.entities.model import Model
from cleverprune.domain.value_objects.attribution_method import GI, AttributionMethod
from cleverprune.domain.value_objects.refinement_plan import RefinementPlan
from cleverprune.domain.value_objects.schedule import default_grid
from cleverprune.infrastructure.hypersearch.schedule import (
    MeanFactor,
    solve_lambda,
    triangular_thresholds,
)

__version__ = "0.1.0"

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RefinerOptions:
    """Method-specific knobs that are not searched over.

    Attributes:
        message_method (AttributionMethod): Message factors for full EGEM.
        weight_space (bool): Apply per-unit multipliers to the next layer's
            weights instead of inserting Scale layers.
        retrain_lr (float): Fine-tuning step size.
        batch (int): Fine-tuning mini-batch size.
        clip (Optional[float]): Elementwise gradient clip for fine-tuning.
        seed (int): Seed of the fine-tuning shuffles.
    """

    message_method: AttributionMethod = field(default_factory=GI)
    weight_space: bool = False
    retrain_lr: float = 1e-3
    batch: int = 32
    clip: Optional[float] = None
    seed: int = 0


class Refiner(ABC):
    """Abstract base for refinement methods.

    Each implementation refines a copy of the model for a single strength
    value; hyper-parameter selection lives in ``hypersearch.selection``.
    """

    method: str = ""

    def __init__(self, options: Optional[RefinerOptions] = None):
        self.options = options or RefinerOptions()

    @property
    def grid(self) -> Tuple[float, ...]:
        """Default candidate grid, weakest first."""
        return default_grid(self.method)

    @abstractmethod
    def refine(
        self, model: Model, data: Dataset, strength: float
    ) -> Tuple[RefinementPlan, Model]:
        """Refine a copy of ``model`` on ``data`` at the given strength.

        Args:
            model: The original model; never modified.
            data: Available data (clean, correctly predicted).
            strength: Grid value (alpha, lambda or epoch count).

        Returns:
            The resolved plan and the refined model.
        """
        ...


def solve_site_lambdas(
    alpha: float,
    sites: Sequence[int],
    mean_factors: Dict[int, MeanFactor],
) -> Tuple[Dict[int, float], List[int]]:
    """Per-site lambda meeting the triangular schedule for ``alpha``.

    Sites are listed first to last; the first refined site gets the
    weakest target.

    Returns:
        Tuple: Lambda per site and the sites found entirely dead.
    """
    schedule = triangular_thresholds(alpha, len(sites))
    lambdas: Dict[int, float] = {}
    dead: List[int] = []
    for site, tau in zip(sites, schedule.thresholds):
        solution = solve_lambda(mean_factors[site], tau)
        lambdas[site] = solution.value
        if solution.all_units_dead:
            dead.append(site)
        logger.debug(f"site {site}: tau {tau:.4f} -> lambda {solution.value:.6g}")
    return lambdas, dead

