"""
Module: src/cleverprune/infrastructure/refiners/pca_egem.py

Soft pruning in the principal-component basis of each site.

Directions the available data never excites get pruned, even when the
artifact spreads over many units, because the basis is rotated to the
data first. On feature maps the channel vector at every spatial position
is one observation.

Version: 0.1.0
License: Apache 2.0
"""

import logging
from typing import Dict

import numpy as np

from cleverprune.domain.entities.activation_stats import PcaBasis
from cleverprune.domain.entities.dataset import Dataset
from cleverprune.domain.entities.model import Model
from cleverprune.domain.value_objects.refinement_plan import RefinementPlan
from cleverprune.domain.value_objects.tensor import Tensor
from cleverprune.infrastructure.hypersearch.schedule import moment_mean_factor
from cleverprune.infrastructure.network import capture_batch
from cleverprune.infrastructure.refine import (
    STATS_CHUNK,
    apply_pca_egem,
    fit_pca,
    site_rows,
)
from cleverprune.infrastructure.refiners.base import Refiner, solve_site_lambdas

__version__ = "0.1.0"

logger = logging.getLogger(__name__)


def collect_site_rows(model: Model, data: Tensor, site: int) -> Tensor:
    """Activation vectors of ``site`` over ``data`` (one row per sample and position)."""
    chunks = [
        site_rows(capture_batch(model, data[i : i + STATS_CHUNK], [site])[site])
        for i in range(0, len(data), STATS_CHUNK)
    ]
    return np.concatenate(chunks)


class PcaEgemRefiner(Refiner):
    """Component-wise soft pruning behind a virtual PCA rotation."""

    method = "pca-egem"

    def refine(self, model: Model, data: Dataset, strength: float):
        sites = list(model.refinable_sites)
        rows: Dict[int, Tensor] = {}
        bases: Dict[int, PcaBasis] = {}
        factors = {}
        for site in sites:
            rows[site] = collect_site_rows(model, data.images, site)
            bases[site] = fit_pca(rows[site])
            second = np.mean(bases[site].project(rows[site]) ** 2, axis=0)
            factors[site] = moment_mean_factor(second)
        lambdas, dead = solve_site_lambdas(strength, sites, factors)

        refined = model
        for site in reversed(sites):
            refined = apply_pca_egem(refined, site, bases[site], lambdas[site], rows[site])

        plan = RefinementPlan(
            method=self.method,
            strength=float(strength),
            lambdas=lambdas,
            sites=tuple(sites),
            dead_sites=tuple(dead),
        )
        return plan, refined
