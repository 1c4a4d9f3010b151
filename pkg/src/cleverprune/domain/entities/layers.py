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

Module: src/cleverprune/domain/entities/layers.py

Layer Specifications

Parameter-holding descriptions of the layer kinds a Model is built from.
The specifications only know their parameters and how shapes propagate;
the arithmetic lives in the layer kernels of the infrastructure layer.

Each kind carries a one-byte tag used by the binary model container.

Version: 0.1.0
License: Apache 2.0
"""

from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from cleverprune.domain.entities.activation_stats import PcaBasis
from cleverprune.domain.errors import DimensionError, DomainValueError
from cleverprune.domain.value_objects.tensor import Tensor

__version__ = "0.1.0"

Shape = Tuple[int, ...]


@dataclass
class Dense:
    """Fully connected layer ``z = W a + b`` with ``W`` of shape ``out x in``."""

    weight: Tensor
    bias: Tensor
    tag = 1

    def output_shape(self, input_shape: Shape) -> Shape:
        if input_shape != (self.weight.shape[1],):
            raise DimensionError(
                f"Dense expects input ({self.weight.shape[1]},), got {input_shape}"
            )
        return (self.weight.shape[0],)


@dataclass
class Conv2D:
    """2-D cross-correlation with ``F x C x kh x kw`` kernels."""

    kernels: Tensor
    bias: Tensor
    stride: int = 1
    pad: int = 0
    tag = 2

    def output_shape(self, input_shape: Shape) -> Shape:
        f, c, kh, kw = self.kernels.shape
        if len(input_shape) != 3 or input_shape[0] != c:
            raise DimensionError(f"Conv2D expects {c} x H x W input, got {input_shape}")
        _, h, w = input_shape
        if kh > h + 2 * self.pad or kw > w + 2 * self.pad:
            raise DimensionError(f"Kernel {kh}x{kw} larger than padded input {h}x{w}")
        return (
            f,
            output_extent(h, kh, self.stride, self.pad),
            output_extent(w, kw, self.stride, self.pad),
        )


@dataclass
class ReLU:
    tag = 3

    def output_shape(self, input_shape: Shape) -> Shape:
        return input_shape


@dataclass
class MaxPool:
    k: int = 2
    stride: int = 2
    tag = 4

    def output_shape(self, input_shape: Shape) -> Shape:
        if len(input_shape) != 3:
            raise DimensionError(f"MaxPool expects C x H x W input, got {input_shape}")
        c, h, w = input_shape
        if self.k > h or self.k > w:
            raise DimensionError(f"Pool window {self.k} larger than input {h}x{w}")
        return (c, output_extent(h, self.k, self.stride, 0), output_extent(w, self.k, self.stride, 0))


@dataclass
class Flatten:
    tag = 5

    def output_shape(self, input_shape: Shape) -> Shape:
        return (int(np.prod(input_shape)),)


@dataclass
class Scale:
    """Soft-pruning multipliers, one per unit (dense) or per channel (conv)."""

    c: Tensor
    tag = 6

    def __post_init__(self):
        _check_unit_interval(self.c)

    def output_shape(self, input_shape: Shape) -> Shape:
        if input_shape[0] != self.c.shape[0]:
            raise DimensionError(
                f"Scale with {self.c.shape[0]} multipliers cannot act on {input_shape}"
            )
        return input_shape


@dataclass
class PcaScale:
    """Soft-pruning in the PCA basis: ``a <- sum_k U_k c_k U_k^T (a - a_bar) + a_bar``.

    On feature maps the map acts on the channel vector at every spatial position.
    """

    basis: PcaBasis
    c: Tensor
    tag = 7

    def __post_init__(self):
        _check_unit_interval(self.c)
        if self.c.shape != (self.basis.rank,):
            raise DimensionError(
                f"PcaScale needs {self.basis.rank} coefficients, got {self.c.shape}"
            )

    def output_shape(self, input_shape: Shape) -> Shape:
        if input_shape[0] != self.basis.dimension:
            raise DimensionError(
                f"PCA basis of dimension {self.basis.dimension} cannot act on {input_shape}"
            )
        return input_shape


LayerSpec = Union[Dense, Conv2D, ReLU, MaxPool, Flatten, Scale, PcaScale]

LAYER_KINDS = (Dense, Conv2D, ReLU, MaxPool, Flatten, Scale, PcaScale)


def output_extent(size: int, kernel: int, stride: int, pad: int) -> int:
    return (size + 2 * pad - kernel) // stride + 1


def _check_unit_interval(c: Tensor) -> None:
    if c.ndim != 1 or np.any(~np.isfinite(c)) or np.any(c < 0.0) or np.any(c > 1.0):
        raise DomainValueError("Pruning multipliers must be a vector with entries in [0, 1]")
