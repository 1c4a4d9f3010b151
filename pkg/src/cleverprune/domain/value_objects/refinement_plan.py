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

Module: src/cleverprune/domain/value_objects/refinement_plan.py

Refinement Plan Value Object

The fully resolved recipe a refiner applied: which method, at which sites,
with which per-site lambda (or epochs and learning rate for retraining).
Plans are written next to refined models so a result can be traced back to
its hyper-parameters.

Version: 0.1.0
License: Apache 2.0
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Tuple

import numpy as np

from cleverprune.domain.errors import DomainValueError

__version__ = "0.1.0"

METHODS: Tuple[str, ...] = (
    "original",
    "egem",
    "egem-full",
    "pca-egem",
    "rgem",
    "ridge",
    "retrain",
)


@dataclass(frozen=True)
class RefinementPlan:
    """Resolved refinement hyper-parameters.

    Attributes:
        method (str): One of ``METHODS``.
        strength (float): The grid value the plan was derived from (alpha,
            last-layer lambda, or epoch count).
        lambdas (Dict[int, float]): Per-site lambda for the soft-pruning
            methods; a single entry keyed by the last layer for RGEM/Ridge.
        sites (Tuple[int, ...]): Refined layer indices.
        epochs (int): Retraining epochs.
        lr (float): Retraining learning rate.
        dead_sites (Tuple[int, ...]): Sites whose lambda search found no
            live unit.
    """

    method: str
    strength: float = 0.0
    lambdas: Dict[int, float] = field(default_factory=dict)
    sites: Tuple[int, ...] = ()
    epochs: int = 0
    lr: float = 0.0
    dead_sites: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.method not in METHODS:
            raise DomainValueError(
                f"Unknown method '{self.method}' (expected one of {', '.join(METHODS)})"
            )
        for site, lam in self.lambdas.items():
            if not np.isfinite(lam) or lam < 0.0:
                raise DomainValueError(f"Lambda at site {site} must be finite and >= 0")
        if self.epochs < 0 or self.lr < 0.0:
            raise DomainValueError("Epochs and learning rate must be nonnegative")

    def check_sites(self, refinable_sites) -> None:
        """Raise unless every planned site is refinable in the target model."""
        unknown = set(self.sites) - set(refinable_sites)
        if unknown:
            raise DomainValueError(f"Sites {sorted(unknown)} are not refinable")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "method": self.method,
            "strength": self.strength,
            "lambdas": {str(k): v for k, v in sorted(self.lambdas.items())},
            "sites": list(self.sites),
            "epochs": self.epochs,
            "lr": self.lr,
            "dead_sites": list(self.dead_sites),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RefinementPlan":
        return cls(
            method=data["method"],
            strength=float(data.get("strength", 0.0)),
            lambdas={int(k): float(v) for k, v in (data.get("lambdas") or {}).items()},
            sites=tuple(int(s) for s in data.get("sites", ())),
            epochs=int(data.get("epochs", 0)),
            lr=float(data.get("lr", 0.0)),
            dead_sites=tuple(int(s) for s in data.get("dead_sites", ())),
        )


def identity_plan() -> RefinementPlan:
    return RefinementPlan(method="original")
