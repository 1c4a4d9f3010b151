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

Module: src/cleverprune/domain/entities/relevance.py

Relevance Entities

``RelevanceMap`` holds unit-wise relevance per layer for one explained
output. ``MessageFactors`` holds the decomposition of a site's relevance over
the edges into the next dense layer, ``R_ij = a_i * rho(w_ji) * d_j``.

Version: 0.1.0
License: Apache 2.0
"""

from dataclasses import dataclass, field
from typing import Dict, Iterator, Tuple

import numpy as np

from cleverprune.domain.errors import DimensionError, PreconditionError
from cleverprune.domain.value_objects.tensor import Tensor

__version__ = "0.1.0"

INPUT_LAYER = -1


@dataclass
class RelevanceMap:
    """Relevance of every unit of every layer for one target output.

    Attributes:
        target (int): Explained output index.
        layers (Dict[int, Tensor]): Relevance keyed by layer index, shaped
            like that layer's output. ``INPUT_LAYER`` keys the network input.
    """

    target: int
    layers: Dict[int, Tensor] = field(default_factory=dict)

    def __getitem__(self, layer: int) -> Tensor:
        if layer not in self.layers:
            raise PreconditionError(f"No relevance recorded for layer {layer}")
        return self.layers[layer]

    def __contains__(self, layer: int) -> bool:
        return layer in self.layers

    def totals(self) -> Dict[int, float]:
        """Summed relevance per layer (conserved by LRP-0 on bias-free nets)."""
        return {k: float(np.sum(v)) for k, v in sorted(self.layers.items())}

    def rows(self) -> Iterator[Tuple[int, int, float]]:
        """Yield ``(layer, unit, R)`` with units in flattened row-major order."""
        for layer, values in sorted(self.layers.items()):
            for unit, value in enumerate(values.ravel()):
                yield layer, unit, float(value)


@dataclass
class MessageFactors:
    """Edge decomposition of relevance at one site.

    Attributes:
        layer (int): Site whose output activations ``a`` are decomposed.
        dense_index (int): Index of the dense layer the edges lead into.
        activations (Tensor): Flattened site activations ``a`` (length n).
        rho_weights (Tensor): ``rho(W)`` of the dense layer, ``out x n``.
        d (Tensor): Message factor per output unit ``j`` (length out).
    """

    layer: int
    dense_index: int
    activations: Tensor
    rho_weights: Tensor
    d: Tensor

    def __post_init__(self):
        out, n = self.rho_weights.shape
        if self.activations.shape != (n,) or self.d.shape != (out,):
            raise DimensionError(
                f"Message factor shapes disagree: a {self.activations.shape}, "
                f"rho(W) {self.rho_weights.shape}, d {self.d.shape}"
            )

    def edge_messages(self) -> Tensor:
        """``n x out`` matrix of ``R_ij``."""
        return self.activations[:, None] * self.rho_weights.T * self.d[None, :]

    def unit_relevance(self) -> Tensor:
        """``R_i = sum_j R_ij``."""
        return self.activations * (self.rho_weights.T @ self.d)
