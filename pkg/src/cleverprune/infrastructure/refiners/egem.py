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

Module: src/cleverprune/infrastructure/refiners/egem.py

Explanation-guided Soft Pruning Refiners

``egem`` soft-prunes every refinable site with per-unit (per-channel on
feature maps) multipliers. ``egem-full`` refits each edge into a following
dense layer individually, weighting by the message factors of the chosen
attribution method; sites without a dense successor fall back to the
per-unit rule, which is the constant-message special case.

Both resolve one lambda per site from the triangular schedule of ``alpha``.
Statistics always come from the unrefined model; sites are refined from
the last to the first so inserted layers never shift a pending site.

Version: 0.1.0
License: Apache 2.0
"""

import logging
from typing import Dict

import numpy as np

from cleverprune.domain.entities.activation_stats import SiteStats
from cleverprune.domain.entities.dataset import Dataset
from cleverprune.domain.entities.layers import Dense
from cleverprune.domain.entities.model import Model
from cleverprune.domain.value_objects.refinement_plan import RefinementPlan
from cleverprune.infrastructure.attribution import following_dense
from cleverprune.infrastructure.hypersearch.schedule import MeanFactor, moment_mean_factor
from cleverprune.infrastructure.refine import (
    apply_scaling,
    apply_weight_scaling,
    collect_stats,
    egem_coefficients,
    egem_full_factors,
    egem_full_weights,
)
from cleverprune.infrastructure.refiners.base import Refiner, solve_site_lambdas

__version__ = "0.1.0"

logger = logging.getLogger(__name__)


class EgemRefiner(Refiner):
    """Per-unit soft pruning at every refinable site."""

    method = "egem"

    def refine(self, model: Model, data: Dataset, strength: float):
        sites = list(model.refinable_sites)
        stats = collect_stats(model, data.images, sites)
        factors = {s: moment_mean_factor(stats.site(s).unit_second_moment) for s in sites}
        lambdas, dead = solve_site_lambdas(strength, sites, factors)

        refined = model
        for site in reversed(sites):
            c = egem_coefficients(stats.site(site), lambdas[site])
            if self.options.weight_space:
                refined = apply_weight_scaling(refined, site, c)
            else:
                refined = apply_scaling(refined, site, c)

        plan = RefinementPlan(
            method=self.method,
            strength=float(strength),
            lambdas=lambdas,
            sites=tuple(sites),
            dead_sites=tuple(dead),
        )
        return plan, refined


def _edge_mean_factor(stats: SiteStats) -> MeanFactor:
    def mean_factor(lam: float) -> float:
        return float(np.mean(egem_full_factors(stats, lam)))

    return mean_factor


class EgemFullRefiner(Refiner):
    """Per-edge refit of the dense layer after each site."""

    method = "egem-full"

    def refine(self, model: Model, data: Dataset, strength: float):
        sites = list(model.refinable_sites)
        stats = collect_stats(
            model,
            data.images,
            sites,
            labels=data.labels,
            message_method=self.options.message_method,
        )
        factors: Dict[int, MeanFactor] = {}
        for site in sites:
            site_stats = stats.site(site)
            if site_stats.has_message_moments:
                factors[site] = _edge_mean_factor(site_stats)
            else:
                factors[site] = moment_mean_factor(site_stats.unit_second_moment)
        lambdas, dead = solve_site_lambdas(strength, sites, factors)

        refined = model
        for site in reversed(sites):
            site_stats = stats.site(site)
            if not site_stats.has_message_moments:
                c = egem_coefficients(site_stats, lambdas[site])
                refined = apply_scaling(refined, site, c)
                continue
            index = following_dense(refined, site)
            dense = refined.layers[index]
            weight = egem_full_weights(dense.weight, site_stats, lambdas[site])
            refined = refined.with_layer_replaced(
                index, Dense(weight=weight, bias=dense.bias.copy())
            )

        plan = RefinementPlan(
            method=self.method,
            strength=float(strength),
            lambdas=lambdas,
            sites=tuple(sites),
            dead_sites=tuple(dead),
        )
        return plan, refined
