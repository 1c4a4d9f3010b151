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

Module: src/cleverprune/domain/entities/model.py

Model and Activation Trace Entities

A Model is an ordered list of layer specifications together with the input
shape, the number of classes and the refinable sites: the layer indices
whose outputs may be soft-pruned. Refinement inserts Scale or PcaScale
layers directly after a site; ``with_layer_inserted`` keeps the site
indices consistent while doing so.

Version: 0.1.0
License: Apache 2.0
"""

import copy
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from cleverprune.domain.entities.layers import (
    Conv2D,
    Dense,
    LayerSpec,
    MaxPool,
    PcaScale,
    ReLU,
    Scale,
    Shape,
)
from cleverprune.domain.errors import DimensionError, DomainValueError
from cleverprune.domain.value_objects.tensor import Tensor

__version__ = "0.1.0"

_SITE_KINDS = (ReLU, MaxPool)


@dataclass
class Model:
    """Layered classifier holding every parameter of the network.

    Attributes:
        layers (List[LayerSpec]): Layers applied in order.
        class_count (int): Length of the logit vector.
        input_shape (Shape): Shape of a single input sample.
        refinable_sites (List[int]): Indices of ReLU (or block-final pooling)
            layers whose outputs are eligible for refinement. Defaults to
            every ReLU.

    Raises:
        DimensionError: If adjacent layer shapes do not compose or the final
            output is not a vector of ``class_count`` logits.
        DomainValueError: If a refinable site does not index a ReLU or
            pooling layer.
    """

    layers: List[LayerSpec]
    class_count: int
    input_shape: Shape
    refinable_sites: Optional[List[int]] = None
    _shapes: List[Shape] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        self.input_shape = tuple(int(e) for e in self.input_shape)
        self._shapes = self._propagate_shapes()
        if self._shapes[-1] != (self.class_count,):
            raise DimensionError(
                f"Model output shape {self._shapes[-1]} does not match "
                f"class_count {self.class_count}"
            )
        if self.refinable_sites is None:
            self.refinable_sites = default_sites(self.layers)
        self.refinable_sites = sorted(int(s) for s in self.refinable_sites)
        for site in self.refinable_sites:
            if not 0 <= site < len(self.layers) or not isinstance(
                self.layers[site], _SITE_KINDS
            ):
                raise DomainValueError(
                    f"Refinable site {site} must index a ReLU or pooling layer"
                )

    def _propagate_shapes(self) -> List[Shape]:
        shapes = []
        shape = self.input_shape
        for index, layer in enumerate(self.layers):
            try:
                shape = tuple(layer.output_shape(shape))
            except DimensionError as exc:
                raise DimensionError(f"Layer {index} ({type(layer).__name__}): {exc}")
            shapes.append(shape)
        if not shapes:
            raise DimensionError("A model needs at least one layer")
        return shapes

    @property
    def layer_shapes(self) -> List[Shape]:
        """Output shape of every layer, in order."""
        return list(self._shapes)

    def input_shape_of(self, index: int) -> Shape:
        return self.input_shape if index == 0 else self._shapes[index - 1]

    def copy(self) -> "Model":
        """Deep copy: parameters of the copy can be mutated independently."""
        return copy.deepcopy(self)

    def with_layer_inserted(self, position: int, layer: LayerSpec) -> "Model":
        """Return a copy with ``layer`` inserted before index ``position``.

        Site indices at or after ``position`` shift by one so they keep
        pointing at the same layers.
        """
        layers = copy.deepcopy(self.layers)
        layers.insert(position, layer)
        sites = [s + 1 if s >= position else s for s in self.refinable_sites]
        return Model(layers, self.class_count, self.input_shape, sites)

    def with_layer_replaced(self, index: int, layer: LayerSpec) -> "Model":
        layers = copy.deepcopy(self.layers)
        layers[index] = layer
        return Model(layers, self.class_count, self.input_shape, list(self.refinable_sites))

    def refinement_tail(self, site: int) -> Tuple[int, int]:
        """Index range ``[start, stop)`` of Scale/PcaScale layers directly after ``site``."""
        start = stop = site + 1
        while stop < len(self.layers) and isinstance(self.layers[stop], (Scale, PcaScale)):
            stop += 1
        return start, stop

    def last_dense_index(self) -> int:
        """Index of the final Dense layer (the linear read-out)."""
        for index in range(len(self.layers) - 1, -1, -1):
            if isinstance(self.layers[index], Dense):
                if index != len(self.layers) - 1:
                    break
                return index
        raise DomainValueError("Model does not end with a linear (Dense) layer")

    def next_parametrised(self, index: int) -> int:
        """Index of the first Dense or Conv2D layer after ``index``, or -1."""
        for later in range(index + 1, len(self.layers)):
            if isinstance(self.layers[later], (Dense, Conv2D)):
                return later
        return -1


@dataclass
class ActivationTrace:
    """Per-layer outputs of one forward pass.

    Attributes:
        activations (List[Tensor]): ``activations[i]`` is the output of layer
            ``i`` for a single input sample.
    """

    activations: List[Tensor]

    def __len__(self) -> int:
        return len(self.activations)

    def __getitem__(self, index: int) -> Tensor:
        return self.activations[index]

    def matches(self, model: Model) -> bool:
        return len(self.activations) == len(model.layers) and all(
            tuple(a.shape) == s for a, s in zip(self.activations, model.layer_shapes)
        )


def default_sites(layers: Sequence[LayerSpec]) -> List[int]:
    """Every ReLU in ``layers``: the default refinement granularity."""
    return [i for i, layer in enumerate(layers) if isinstance(layer, ReLU)]
