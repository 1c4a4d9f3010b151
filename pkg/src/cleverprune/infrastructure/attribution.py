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

Module: src/cleverprune/infrastructure/attribution.py

Attribution Engine

Gradient x Input, Integrated Gradients and generic LRP for layered models,
and the message factors ``d_j`` that decompose a site's relevance over the
edges into the following dense layer:

    R_ij = a_i * rho(w_ji) * d_j,    sum_j R_ij = R_i

``layer=None`` designates the network input. LRP treats convolutions as
their unrolled linear map, routes relevance through max-pooling to the
winning position, passes it unchanged through ReLU and Flatten, and applies
the generic linear rule to Scale and PcaScale layers.

Version: 0.1.0
License: Apache 2.0
"""

import logging
from typing import List, Optional, Tuple

import numpy as np
import numpy.typing as npt

from cleverprune.domain.entities.layers import (
    Conv2D,
    Dense,
    Flatten,
    MaxPool,
    PcaScale,
    ReLU,
    Scale,
)
from cleverprune.domain.entities.model import Model
from cleverprune.domain.entities.relevance import INPUT_LAYER, MessageFactors, RelevanceMap
from cleverprune.domain.errors import (
    DimensionError,
    DomainValueError,
    NumericalError,
    PreconditionError,
)
from cleverprune.domain.value_objects.attribution_method import (
    GI,
    IG,
    LRP,
    AttributionMethod,
)
from cleverprune.domain.value_objects.tensor import Tensor
from cleverprune.infrastructure.layer_kernels import broadcast_channels, pca_mixing_matrix
from cleverprune.infrastructure.network import backward, output_gradients, run_layers
from cleverprune.infrastructure.tensor_ops import col2im, im2col, max_pool_batch, max_pool_backward

__version__ = "0.1.0"

logger = logging.getLogger(__name__)


def _check_request(model: Model, x: Tensor, target: int, layer: Optional[int]) -> None:
    if tuple(x.shape) != model.input_shape:
        raise DimensionError(
            f"Layer 0 expects input of shape {model.input_shape}, got {tuple(x.shape)}"
        )
    if not 0 <= target < model.class_count:
        raise DomainValueError(f"Target {target} outside [0, {model.class_count})")
    if layer is not None and not 0 <= layer < len(model.layers):
        raise DomainValueError(
            f"Layer index {layer} outside [0, {len(model.layers)}) (None is the input)"
        )


def _tail_gradient(model: Model, activations: Tensor, start: int, target: int) -> Tensor:
    """Gradient of logit ``target`` w.r.t. a batch fed into layer ``start``."""
    if start == len(model.layers):
        seed = np.zeros_like(activations)
        seed[:, target] = 1.0
        return seed
    outputs, caches = run_layers(model, activations, start)
    seed = np.zeros_like(outputs[-1])
    seed[:, target] = 1.0
    grad_in, _, _ = backward(model, caches, seed, start)
    return grad_in


def gradient_x_input(
    model: Model, x: Tensor, target: int, layer: Optional[int] = None
) -> Tensor:
    """``R_i = a_i * dy_target/da_i`` at the output of ``layer``.

    Example:
        >>> R = gradient_x_input(model, x, target=3)
        >>> R.shape == x.shape
        True
    """
    _check_request(model, x, target, layer)
    outputs, grads, grad_in = output_gradients(model, x[None], target)
    if layer is None:
        return x * grad_in[0]
    return outputs[layer][0] * grads[layer][0]


def integrated_gradients(
    model: Model, x: Tensor, target: int, layer: Optional[int] = None, steps: int = 64
) -> Tensor:
    """Integrated Gradients along ``t * a`` with the midpoint rule.

    The gradients are taken at ``t_k = (k + 0.5) / steps``; ``steps = 1``
    reduces to Gradient x Input evaluated at ``0.5 * a``.
    """
    method = IG(steps=steps)
    _check_request(model, x, target, layer)
    if layer is None:
        a, start = x, 0
    else:
        outputs, _ = run_layers(model, x[None], 0, layer + 1)
        a, start = outputs[layer][0], layer + 1
    t = method.grid().reshape((-1,) + (1,) * a.ndim)
    grads = _tail_gradient(model, t * a[None], start, target)
    return a * grads.mean(axis=0)


def _stabilized_ratio(relevance: Tensor, z: Tensor, epsilon: float) -> Tensor:
    """``R / (z + epsilon * sign(z))`` with ``sign(0) = +1``."""
    if epsilon > 0.0:
        return relevance / (z + epsilon * np.where(z >= 0.0, 1.0, -1.0))
    zero = z == 0.0
    if np.any(zero & (relevance != 0.0)):
        raise NumericalError(
            "LRP denominator is zero while relevance is not; use epsilon > 0"
        )
    return np.divide(relevance, z, out=np.zeros_like(z), where=~zero)


def _linear_rule(
    a_rows: Tensor, rho_w: Tensor, relevance_rows: Tensor, epsilon: float
) -> Tuple[Tensor, Tensor]:
    """Generic rule for ``z = rho(W) a`` applied row-wise.

    Returns:
        Tuple[Tensor, Tensor]: Input relevance (rows x n) and the ratios
            ``s_j`` (rows x out).
    """
    z = a_rows @ rho_w.T
    s = _stabilized_ratio(relevance_rows, z, epsilon)
    return a_rows * (s @ rho_w), s


def _propagate(layer, method: LRP, a: Tensor, relevance: Tensor) -> Tensor:
    """Relevance at the input of ``layer`` given its input ``a`` and output relevance."""
    if isinstance(layer, Dense):
        r_in, _ = _linear_rule(a[None], method.rho(layer.weight), relevance[None], method.epsilon)
        return r_in[0]
    if isinstance(layer, Conv2D):
        f, c, kh, kw = layer.kernels.shape
        columns = im2col(a[None], kh, kw, layer.stride, layer.pad)[0]
        rho_k = method.rho(layer.kernels).reshape(f, -1)
        s = _stabilized_ratio(relevance.reshape(f, -1), rho_k @ columns, method.epsilon)
        spread = col2im((rho_k.T @ s)[None], (1,) + a.shape, kh, kw, layer.stride, layer.pad)
        return a * spread[0]
    if isinstance(layer, (ReLU, Flatten)):
        return relevance.reshape(a.shape)
    if isinstance(layer, MaxPool):
        _, argmax = max_pool_batch(a[None], layer.k, layer.stride)
        return max_pool_backward(relevance[None], argmax, (1,) + a.shape, layer.k, layer.stride)[0]
    if isinstance(layer, Scale):
        z = a * broadcast_channels(method.rho(layer.c), a.ndim + 1)[0]
        return z * _stabilized_ratio(relevance, z, method.epsilon)
    if isinstance(layer, PcaScale):
        rho_m = method.rho(pca_mixing_matrix(layer))
        if a.ndim == 3:
            rows = a.reshape(a.shape[0], -1).T
            r_rows = relevance.reshape(a.shape[0], -1).T
            r_in, _ = _linear_rule(rows, rho_m, r_rows, method.epsilon)
            return r_in.T.reshape(a.shape)
        r_in, _ = _linear_rule(a[None], rho_m, relevance[None], method.epsilon)
        return r_in[0]
    raise TypeError(f"No LRP rule for layer type {type(layer).__name__}")


def lrp(model: Model, x: Tensor, target: int, method: LRP = LRP()) -> RelevanceMap:
    """Relevance of every layer's output and of the input.

    Output relevance is the one-hot target times its logit.

    Raises:
        NumericalError: If a denominator vanishes with ``epsilon = 0`` while
            relevance has to pass through it.
    """
    _check_request(model, x, target, None)
    outputs, _ = run_layers(model, x[None])
    activations: List[Tensor] = [o[0] for o in outputs]
    relevance = np.zeros_like(activations[-1])
    relevance[target] = activations[-1][target]

    result = RelevanceMap(target=target)
    for index in range(len(model.layers) - 1, -1, -1):
        result.layers[index] = relevance
        layer_input = x if index == 0 else activations[index - 1]
        relevance = _propagate(model.layers[index], method, layer_input, relevance)
    result.layers[INPUT_LAYER] = relevance
    return result


def relevance_at(
    model: Model,
    x: Tensor,
    target: int,
    layer: Optional[int],
    method: AttributionMethod,
) -> Tensor:
    """Unit-wise relevance at one layer for any attribution method."""
    if isinstance(method, GI):
        return gradient_x_input(model, x, target, layer)
    if isinstance(method, IG):
        return integrated_gradients(model, x, target, layer, method.steps)
    _check_request(model, x, target, layer)
    return lrp(model, x, target, method)[INPUT_LAYER if layer is None else layer]


def following_dense(model: Model, layer: int) -> int:
    """Index of the Dense layer consuming ``layer``'s output, skipping Flatten.

    Raises:
        PreconditionError: If the next non-Flatten layer is not Dense.
    """
    index = layer + 1
    while index < len(model.layers) and isinstance(model.layers[index], Flatten):
        index += 1
    if index >= len(model.layers) or not isinstance(model.layers[index], Dense):
        raise PreconditionError(
            f"Message factors at layer {layer} need a dense successor"
        )
    return index


def message_factors(
    model: Model, x: Tensor, target: int, layer: int, method: AttributionMethod = GI()
) -> MessageFactors:
    """Decompose the relevance at ``layer`` over the edges into the next dense layer.

    ``d_j`` is ``dy/dz_j`` for GI, its path average for IG, and
    ``R_j / (sum_i a_i rho(w_ji) + eps * sign)`` for LRP.
    """
    _check_request(model, x, target, layer)
    dense_index = following_dense(model, layer)
    dense = model.layers[dense_index]
    outputs, _ = run_layers(model, x[None], 0, layer + 1)
    a = outputs[layer][0].ravel()

    if isinstance(method, GI):
        _, grads, _ = output_gradients(model, x[None], target)
        d = grads[dense_index][0]
    elif isinstance(method, IG):
        z_path = method.grid()[:, None] * a[None] @ dense.weight.T + dense.bias
        d = _tail_gradient(model, z_path, dense_index + 1, target).mean(axis=0)
    else:
        relevance = lrp(model, x, target, method)[dense_index]
        z = method.rho(dense.weight) @ a
        d = _stabilized_ratio(relevance, z, method.epsilon)
    return MessageFactors(
        layer=layer,
        dense_index=dense_index,
        activations=a,
        rho_weights=method.rho(dense.weight),
        d=d,
    )


def message_factor_batch(
    model: Model,
    x: Tensor,
    targets: npt.NDArray[np.int64],
    layer: int,
    method: AttributionMethod = GI(),
) -> Tuple[Tensor, Tensor, int]:
    """Site activations and message factors for a batch.

    Returns:
        Tuple: ``N x n`` flattened activations, ``N x out`` factors ``d``, and
            the index of the dense layer the edges lead into.
    """
    dense_index = following_dense(model, layer)
    if isinstance(method, GI):
        outputs, grads, _ = output_gradients(model, x, np.asarray(targets))
        return outputs[layer].reshape(len(x), -1), grads[dense_index], dense_index
    factors = [message_factors(model, xi, int(t), layer, method) for xi, t in zip(x, targets)]
    return (
        np.stack([f.activations for f in factors]),
        np.stack([f.d for f in factors]),
        dense_index,
    )
