"""
Module: src/cleverprune/infrastructure/refiners/last_layer.py

Last-layer refits: RGEM reproduces the original outputs, Ridge fits the
labels directly. Both leave every layer except the read-out untouched and
take the ridge penalty as their strength.

Version: 0.1.0
License: Apache 2.0
"""

from cleverprune.domain.entities.dataset import Dataset
from cleverprune.domain.entities.model import Model
from cleverprune.domain.value_objects.refinement_plan import RefinementPlan
from cleverprune.infrastructure.refine import rgem_refit, ridge_refit
from cleverprune.infrastructure.refiners.base import Refiner

__version__ = "0.1.0"


class RgemRefiner(Refiner):
    method = "rgem"

    def refine(self, model: Model, data: Dataset, strength: float):
        refined = rgem_refit(model, data.images, strength)
        return _plan(self.method, model, strength), refined


class RidgeRefiner(Refiner):
    method = "ridge"

    def refine(self, model: Model, data: Dataset, strength: float):
        refined = ridge_refit(model, data.images, data.labels, strength)
        return _plan(self.method, model, strength), refined


def _plan(method: str, model: Model, lam: float) -> RefinementPlan:
    return RefinementPlan(
        method=method,
        strength=float(lam),
        lambdas={model.last_dense_index(): float(lam)},
    )
