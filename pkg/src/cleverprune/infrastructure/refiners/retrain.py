"""
Module: src/cleverprune/infrastructure/refiners/retrain.py

Full fine-tuning on the available data; the strength is the epoch count.

Version: 0.1.0
License: Apache 2.0
"""

from cleverprune.domain.entities.dataset import Dataset
from cleverprune.domain.entities.model import Model
from cleverprune.domain.errors import DomainValueError
from cleverprune.domain.value_objects.refinement_plan import RefinementPlan
from cleverprune.domain.value_objects.tensor import SeededRng
from cleverprune.infrastructure.refine import retrain
from cleverprune.infrastructure.refiners.base import Refiner

__version__ = "0.1.0"


class RetrainRefiner(Refiner):
    method = "retrain"

    def refine(self, model: Model, data: Dataset, strength: float):
        epochs = int(strength)
        if epochs != strength or epochs < 0:
            raise DomainValueError(f"Retrain needs a whole number of epochs, got {strength}")
        options = self.options
        rng = SeededRng(options.seed).child("retrain", epochs)
        refined = retrain(
            model,
            data.images,
            data.labels,
            epochs,
            options.retrain_lr,
            rng,
            batch=options.batch,
            clip=options.clip,
        )
        plan = RefinementPlan(
            method=self.method,
            strength=float(epochs),
            epochs=epochs,
            lr=options.retrain_lr,
        )
        return plan, refined
