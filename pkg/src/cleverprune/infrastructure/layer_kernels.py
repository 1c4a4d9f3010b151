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

Module: src/cleverprune/infrastructure/layer_kernels.py

Layer kernel registry.

Maps each layer specification type to the kernel that evaluates it on a
batch. Kernels are stateless: ``forward`` returns the output and a cache,
``backward`` consumes that cache and returns the input gradient together
with the gradients of the layer's trainable parameters.

Scale and PcaScale have no trainable parameters; refinement sets them in
closed form and training leaves them untouched.

Version: 0.1.0
License: Apache 2.0
"""

from abc import ABC, abstractmethod
from typing import Any, Dict, Tuple

import numpy as np

from cleverprune.domain.entities.layers import (
    Conv2D,
    Dense,
    Flatten,
    LayerSpec,
    MaxPool,
    PcaScale,
    ReLU,
    Scale,
)
from cleverprune.domain.value_objects.tensor import Tensor
from cleverprune.infrastructure.tensor_ops import (
    col2im,
    conv2d_batch,
    max_pool_backward,
    max_pool_batch,
    relu,
)

__version__ = "0.1.0"

ParamGrads = Dict[str, Tensor]


class LayerKernel(ABC):
    """Abstract batch kernel for one layer kind.

    Inputs and outputs carry a leading batch axis.
    """

    param_names: Tuple[str, ...] = ()

    @abstractmethod
    def forward(self, layer: LayerSpec, x: Tensor) -> Tuple[Tensor, Any]:
        """Return ``(output, cache)`` for the batch ``x``."""
        ...

    @abstractmethod
    def backward(
        self, layer: LayerSpec, cache: Any, grad_out: Tensor
    ) -> Tuple[Tensor, ParamGrads]:
        """Return ``(grad_input, parameter_gradients)``."""
        ...


class DenseKernel(LayerKernel):
    param_names = ("weight", "bias")

    def forward(self, layer: Dense, x):
        return x @ layer.weight.T + layer.bias, x

    def backward(self, layer: Dense, cache, grad_out):
        x = cache
        grads = {"weight": grad_out.T @ x, "bias": grad_out.sum(axis=0)}
        return grad_out @ layer.weight, grads


class Conv2DKernel(LayerKernel):
    param_names = ("kernels", "bias")

    def forward(self, layer: Conv2D, x):
        out, columns = conv2d_batch(x, layer.kernels, layer.bias, layer.stride, layer.pad)
        return out, (x.shape, columns)

    def backward(self, layer: Conv2D, cache, grad_out):
        input_shape, columns = cache
        f, c, kh, kw = layer.kernels.shape
        flat = grad_out.reshape(grad_out.shape[0], f, -1)
        grads = {
            "kernels": np.einsum("nfp,nkp->fk", flat, columns).reshape(f, c, kh, kw),
            "bias": grad_out.sum(axis=(0, 2, 3)),
        }
        grad_columns = np.einsum("fk,nfp->nkp", layer.kernels.reshape(f, -1), flat)
        grad_in = col2im(grad_columns, input_shape, kh, kw, layer.stride, layer.pad)
        return grad_in, grads


class ReLUKernel(LayerKernel):
    def forward(self, layer: ReLU, x):
        return relu(x), x > 0.0

    def backward(self, layer: ReLU, cache, grad_out):
        return grad_out * cache, {}


class MaxPoolKernel(LayerKernel):
    def forward(self, layer: MaxPool, x):
        pooled, argmax = max_pool_batch(x, layer.k, layer.stride)
        return pooled, (x.shape, argmax)

    def backward(self, layer: MaxPool, cache, grad_out):
        input_shape, argmax = cache
        return max_pool_backward(grad_out, argmax, input_shape, layer.k, layer.stride), {}


class FlattenKernel(LayerKernel):
    def forward(self, layer: Flatten, x):
        return x.reshape(x.shape[0], -1), x.shape

    def backward(self, layer: Flatten, cache, grad_out):
        return grad_out.reshape(cache), {}


class ScaleKernel(LayerKernel):
    def forward(self, layer: Scale, x):
        return x * broadcast_channels(layer.c, x.ndim), None

    def backward(self, layer: Scale, cache, grad_out):
        return grad_out * broadcast_channels(layer.c, grad_out.ndim), {}


class PcaScaleKernel(LayerKernel):
    """``a <- U diag(c) U^T (a - a_bar) + a_bar`` on the channel axis."""

    def forward(self, layer: PcaScale, x):
        basis = layer.basis
        mixing = pca_mixing_matrix(layer)
        channels_last = _to_channels_last(x)
        out = (channels_last - basis.mean) @ mixing + basis.mean
        return _from_channels_last(out, x.shape), None

    def backward(self, layer: PcaScale, cache, grad_out):
        mixing = pca_mixing_matrix(layer)
        grad = _to_channels_last(grad_out) @ mixing.T
        return _from_channels_last(grad, grad_out.shape), {}


_KERNELS: Dict[type, LayerKernel] = {}


def _register(kind: type, kernel: LayerKernel) -> None:
    _KERNELS[kind] = kernel


_register(Dense, DenseKernel())
_register(Conv2D, Conv2DKernel())
_register(ReLU, ReLUKernel())
_register(MaxPool, MaxPoolKernel())
_register(Flatten, FlattenKernel())
_register(Scale, ScaleKernel())
_register(PcaScale, PcaScaleKernel())


def get_kernel(layer: LayerSpec) -> LayerKernel:
    """Return the kernel evaluating ``layer``."""
    try:
        return _KERNELS[type(layer)]
    except KeyError:
        raise TypeError(f"No kernel registered for layer type {type(layer).__name__}")


def broadcast_channels(c: Tensor, ndim: int) -> Tensor:
    """Reshape per-unit or per-channel multipliers against a batch of rank ``ndim``."""
    return c.reshape((1, -1) + (1,) * (ndim - 2))


def pca_mixing_matrix(layer: PcaScale) -> Tensor:
    """``U diag(c) U^T`` (symmetric, ``n x n``)."""
    u = layer.basis.components
    return (u * layer.c) @ u.T


def _to_channels_last(x: Tensor) -> Tensor:
    if x.ndim == 4:
        return x.transpose(0, 2, 3, 1)
    return x


def _from_channels_last(x: Tensor, shape) -> Tensor:
    if len(shape) == 4:
        return np.ascontiguousarray(x.transpose(0, 3, 1, 2))
    return x
