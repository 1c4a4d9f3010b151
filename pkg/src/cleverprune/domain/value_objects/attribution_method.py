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

Module: src/cleverprune/domain/value_objects/attribution_method.py

Attribution Method Value Objects

The three explanation techniques whose scores decompose over edges as
``R_ij = a_i * rho(w_ij) * d_j``: Gradient x Input, Integrated Gradients and
generic LRP with the ``rho(t) = t + gamma * max(0, t)`` weight transform and an
epsilon stabilizer.

Version: 0.1.0
License: Apache 2.0
"""

from dataclasses import dataclass
from typing import Union

import numpy as np

from cleverprune.domain.errors import DomainValueError
from cleverprune.domain.value_objects.tensor import Tensor

__version__ = "0.1.0"


@dataclass(frozen=True)
class GI:
    """Gradient x Input: ``R_i = a_i * dy/da_i``."""

    name = "gi"

    def rho(self, weights: Tensor) -> Tensor:
        return weights


@dataclass(frozen=True)
class IG:
    """Integrated Gradients from the origin, midpoint rule on ``steps`` points.

    Attributes:
        steps (int): Number of quadrature points, at least one.
    """

    steps: int = 64
    name = "ig"

    def __post_init__(self):
        if int(self.steps) < 1:
            raise DomainValueError(f"IG needs at least one step, got {self.steps}")

    def rho(self, weights: Tensor) -> Tensor:
        return weights

    def grid(self) -> Tensor:
        """Interpolation points ``t_k = (k + 0.5) / steps``."""
        return (np.arange(self.steps, dtype=np.float64) + 0.5) / self.steps


@dataclass(frozen=True)
class LRP:
    """Generic LRP rule. ``gamma = epsilon = 0`` is LRP-0.

    Attributes:
        gamma (float): Weight of the positive-part boost in ``rho``.
        epsilon (float): Stabilizer added to denominators, signed like them.
    """

    gamma: float = 0.0
    epsilon: float = 0.0
    name = "lrp"

    def __post_init__(self):
        if not (np.isfinite(self.gamma) and self.gamma >= 0.0):
            raise DomainValueError(f"LRP gamma must be finite and >= 0, got {self.gamma}")
        if not (np.isfinite(self.epsilon) and self.epsilon >= 0.0):
            raise DomainValueError(
                f"LRP epsilon must be finite and >= 0, got {self.epsilon}"
            )

    def rho(self, weights: Tensor) -> Tensor:
        if self.gamma == 0.0:
            return weights
        return weights + self.gamma * np.maximum(weights, 0.0)


AttributionMethod = Union[GI, IG, LRP]


def attribution_from_name(
    name: str, steps: int = 64, gamma: float = 0.0, epsilon: float = 0.0
) -> AttributionMethod:
    """Build an attribution method from its configuration name."""
    key = name.lower()
    if key == "gi":
        return GI()
    if key == "ig":
        return IG(steps=steps)
    if key == "lrp":
        return LRP(gamma=gamma, epsilon=epsilon)
    raise DomainValueError(f"Unknown attribution method '{name}' (expected gi, ig or lrp)")
