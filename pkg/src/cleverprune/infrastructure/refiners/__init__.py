"""
Module: src/cleverprune/infrastructure/refiners/__init__.py

Refinement method registry.

Maps method names to refiner classes. Used by the refinement service and
the sweeps to resolve the refiner for a configured method.

Version: 0.1.0
License: Apache 2.0
"""

from typing import Dict, List, Optional, Type

from cleverprune.domain.entities.dataset import Dataset
from cleverprune.domain.entities.model import Model
from cleverprune.domain.errors import DomainValueError
from cleverprune.domain.value_objects.refinement_plan import identity_plan
from cleverprune.infrastructure.refiners.base import Refiner, RefinerOptions
from cleverprune.infrastructure.refiners.egem import EgemFullRefiner, EgemRefiner
from cleverprune.infrastructure.refiners.last_layer import RgemRefiner, RidgeRefiner
from cleverprune.infrastructure.refiners.pca_egem import PcaEgemRefiner
from cleverprune.infrastructure.refiners.retrain import RetrainRefiner


class OriginalRefiner(Refiner):
    """Identity method: returns an unchanged copy."""

    method = "original"

    def refine(self, model: Model, data: Dataset, strength: float):
        return identity_plan(), model.copy()


_REFINERS: Dict[str, Type[Refiner]] = {}


def _register(refiner: Type[Refiner]) -> None:
    _REFINERS[refiner.method] = refiner


_register(OriginalRefiner)
_register(EgemRefiner)
_register(EgemFullRefiner)
_register(PcaEgemRefiner)
_register(RgemRefiner)
_register(RidgeRefiner)
_register(RetrainRefiner)


def get_refiner(method: str, options: Optional[RefinerOptions] = None) -> Refiner:
    """Return a refiner for ``method`` configured with ``options``.

    Raises:
        DomainValueError: If no refiner is registered under that name.
    """
    try:
        return _REFINERS[method](options)
    except KeyError:
        raise DomainValueError(
            f"Unknown refinement method '{method}' "
            f"(expected one of {', '.join(supported_methods())})"
        )


def supported_methods() -> List[str]:
    """Registered method names in registration order."""
    return list(_REFINERS.keys())


__all__ = ["Refiner", "RefinerOptions", "get_refiner", "supported_methods"]
