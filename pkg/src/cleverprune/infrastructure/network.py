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

Module: src/cleverprune/infrastructure/network.py

Network Engine

Forward evaluation with activation capture, reverse-mode gradients, and
mini-batch Adam training for layered models, plus builders for the
architectures the benchmark uses.

Gradients come from an explicit backward sweep through the layer kernels;
there is no tape. Every reduction over the batch is a single numpy call,
so results are bit-reproducible for a fixed model, input and seed.

Key Features:
    - ``forward_with_trace`` records every layer output for one input
    - ``output_gradients`` differentiates one logit w.r.t. every layer output
    - ``train`` runs Adam (beta1 0.9, beta2 0.999, eps 1e-8) with optional
      elementwise gradient clipping

Version: 0.1.0
License: Apache 2.0
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt

from cleverprune.domain.entities.layers import Conv2D, Dense, Flatten, MaxPool, ReLU
from cleverprune.domain.entities.model import ActivationTrace, Model
from cleverprune.domain.errors import DimensionError, DomainValueError, NumericalError
from cleverprune.domain.value_objects.tensor import SeededRng, Tensor
from cleverprune.infrastructure.layer_kernels import ParamGrads, get_kernel
from cleverprune.infrastructure.tensor_ops import cross_entropy, reduce_mean, softmax

__version__ = "0.1.0"

logger = logging.getLogger(__name__)

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


@dataclass(frozen=True)
class Label:
    """Differentiate softmax cross-entropy against class ``index``."""

    index: int


@dataclass(frozen=True)
class Logit:
    """Differentiate the raw output logit ``index``."""

    index: int


LossTarget = Union[Label, Logit]


@dataclass
class TrainingLog:
    """Per-epoch mean training loss."""

    epoch_losses: List[float] = field(default_factory=list)

    @property
    def final_loss(self) -> Optional[float]:
        return self.epoch_losses[-1] if self.epoch_losses else None


def _check_batch(model: Model, x: Tensor) -> None:
    if tuple(x.shape[1:]) != model.input_shape:
        raise DimensionError(
            f"Layer 0 expects samples of shape {model.input_shape}, "
            f"got {tuple(x.shape[1:])}"
        )


def run_layers(
    model: Model, x: Tensor, start: int = 0, stop: Optional[int] = None
) -> Tuple[List[Tensor], List[Any]]:
    """Apply layers ``[start, stop)`` to a batch, keeping outputs and caches."""
    stop = len(model.layers) if stop is None else stop
    outputs, caches = [], []
    current = x
    for layer in model.layers[start:stop]:
        current, cache = get_kernel(layer).forward(layer, current)
        outputs.append(current)
        caches.append(cache)
    return outputs, caches


def forward_batch(model: Model, x: Tensor) -> Tensor:
    """Logits ``N x class_count`` for a batch ``N x input_shape``."""
    _check_batch(model, x)
    current = x
    for layer in model.layers:
        current, _ = get_kernel(layer).forward(layer, current)
    return current


def forward(model: Model, x: Tensor) -> Tensor:
    return forward_batch(model, x[None])[0]


def capture_batch(model: Model, x: Tensor, layers: Sequence[int]) -> Dict[int, Tensor]:
    """Outputs of the requested layers for a batch."""
    _check_batch(model, x)
    outputs, _ = run_layers(model, x, 0, max(layers) + 1)
    return {i: outputs[i] for i in layers}


def forward_with_trace(model: Model, x: Tensor) -> Tuple[Tensor, ActivationTrace]:
    """Evaluate one sample and record the output of every layer.

    Raises:
        DimensionError: If ``x`` does not match the model's input shape.

    Example:
        >>> logits, trace = forward_with_trace(model, image)
        >>> len(trace) == len(model.layers)
        True
    """
    if tuple(x.shape) != model.input_shape:
        raise DimensionError(
            f"Layer 0 expects input of shape {model.input_shape}, got {tuple(x.shape)}"
        )
    outputs, _ = run_layers(model, x[None])
    return outputs[-1][0], ActivationTrace([o[0] for o in outputs])


def backward(
    model: Model, caches: List[Any], grad_logits: Tensor, start: int = 0
) -> Tuple[Tensor, List[ParamGrads], List[Tensor]]:
    """Backward sweep over layers ``[start, end)``.

    Returns:
        Tuple: gradient w.r.t. the input of layer ``start``, parameter
            gradients per layer, and the gradient w.r.t. each layer's output
            (both lists indexed from ``start``).
    """
    count = len(model.layers) - start
    param_grads: List[ParamGrads] = [dict() for _ in range(count)]
    output_grads: List[Tensor] = [None] * count
    grad = grad_logits
    for offset in range(count - 1, -1, -1):
        layer = model.layers[start + offset]
        output_grads[offset] = grad
        grad, param_grads[offset] = get_kernel(layer).backward(layer, caches[offset], grad)
    return grad, param_grads, output_grads


def output_gradients(
    model: Model, x: Tensor, targets: Union[int, npt.NDArray[np.int64]]
) -> Tuple[List[Tensor], List[Tensor], Tensor]:
    """Gradient of logit ``target`` w.r.t. every layer output, per sample.

    Args:
        model (Model): Network to differentiate.
        x (Tensor): Batch of inputs.
        targets: One logit index for the whole batch or one per sample.

    Returns:
        Tuple: layer outputs, gradients w.r.t. layer outputs, gradient w.r.t.
            the network input.
    """
    _check_batch(model, x)
    outputs, caches = run_layers(model, x)
    seed = np.zeros_like(outputs[-1])
    seed[np.arange(x.shape[0]), targets] = 1.0
    grad_in, _, output_grads = backward(model, caches, seed)
    return outputs, output_grads, grad_in


def loss_and_gradients(
    model: Model, x: Tensor, labels: npt.NDArray[np.int64]
) -> Tuple[float, List[ParamGrads]]:
    """Mean softmax cross-entropy over a batch and its parameter gradients."""
    outputs, caches = run_layers(model, x)
    logits = outputs[-1]
    n = x.shape[0]
    loss = float(reduce_mean(cross_entropy(logits, labels)))
    grad = softmax(logits, axis=1)
    grad[np.arange(n), labels] -= 1.0
    _, param_grads, _ = backward(model, caches, grad / n)
    return loss, param_grads


def gradients(model: Model, x: Tensor, target: LossTarget) -> List[ParamGrads]:
    """Exact parameter gradients of one scalar for a single input.

    Args:
        model (Model): Network to differentiate.
        x (Tensor): One input sample.
        target (LossTarget): ``Label(k)`` for cross-entropy against class
            ``k``, ``Logit(k)`` for the raw logit ``k``.

    Returns:
        List[ParamGrads]: Per layer, a mapping from parameter name to its
            gradient (empty for parameter-free layers).

    Raises:
        DomainValueError: If the target index is not a valid class.
    """
    if not 0 <= target.index < model.class_count:
        raise DomainValueError(
            f"Target {target.index} outside [0, {model.class_count})"
        )
    if tuple(x.shape) != model.input_shape:
        raise DimensionError(
            f"Layer 0 expects input of shape {model.input_shape}, got {tuple(x.shape)}"
        )
    if isinstance(target, Label):
        _, grads = loss_and_gradients(model, x[None], np.array([target.index]))
        return grads
    outputs, caches = run_layers(model, x[None])
    seed = np.zeros_like(outputs[-1])
    seed[0, target.index] = 1.0
    _, grads, _ = backward(model, caches, seed)
    return grads


def predict(model: Model, x: Tensor, batch: int = 256) -> npt.NDArray[np.int64]:
    """Arg-max class per sample, evaluated in chunks."""
    return np.concatenate(
        [np.argmax(forward_batch(model, x[i : i + batch]), axis=1) for i in range(0, len(x), batch)]
    )


def logits_batched(model: Model, x: Tensor, batch: int = 256) -> Tensor:
    return np.concatenate(
        [forward_batch(model, x[i : i + batch]) for i in range(0, len(x), batch)]
    )


def train(
    model: Model,
    data: Tensor,
    labels: npt.NDArray[np.int64],
    epochs: int,
    lr: float,
    batch: int,
    rng: SeededRng,
    clip: Optional[float] = None,
) -> TrainingLog:
    """Fit the model in place with mini-batch Adam on softmax cross-entropy.

    Each epoch visits the data in an order drawn from ``rng``. Scale and
    PcaScale layers are not trained.

    Args:
        model (Model): Model whose Dense and Conv2D parameters are updated.
        data (Tensor): ``N x input_shape`` training inputs.
        labels (ndarray): ``N`` class labels.
        epochs (int): Number of passes; 0 leaves the model untouched.
        lr (float): Adam step size.
        batch (int): Mini-batch size.
        rng (SeededRng): Source of the per-epoch shuffles.
        clip (Optional[float]): If set, gradients are clipped elementwise to
            ``[-clip, clip]``.

    Returns:
        TrainingLog: Mean loss of every epoch.

    Raises:
        DomainValueError: On empty data, invalid labels or hyper-parameters.
        NumericalError: If a mini-batch loss is not finite; carries the epoch
            and batch index.
    """
    labels = np.asarray(labels, dtype=np.int64)
    if len(data) == 0 or len(data) != len(labels):
        raise DomainValueError("Training needs a nonempty dataset with one label per sample")
    if labels.min() < 0 or labels.max() >= model.class_count:
        raise DomainValueError(f"Labels must lie in [0, {model.class_count})")
    if epochs < 0 or lr <= 0.0 or batch < 1:
        raise DomainValueError("epochs must be >= 0, lr > 0 and batch >= 1")
    _check_batch(model, data)

    log = TrainingLog()
    trainable = [
        (index, name)
        for index, layer in enumerate(model.layers)
        for name in get_kernel(layer).param_names
    ]
    first_moment = {key: np.zeros_like(getattr(model.layers[key[0]], key[1])) for key in trainable}
    second_moment = {key: np.zeros_like(v) for key, v in first_moment.items()}
    step = 0

    for epoch in range(epochs):
        order = rng.permutation(len(data))
        total = 0.0
        for batch_index, begin in enumerate(range(0, len(data), batch)):
            idx = order[begin : begin + batch]
            loss, grads = loss_and_gradients(model, data[idx], labels[idx])
            if not np.isfinite(loss):
                raise NumericalError(
                    f"Non-finite training loss {loss} at epoch {epoch}, batch {batch_index}",
                    epoch=epoch,
                    batch=batch_index,
                )
            total += loss * len(idx)
            step += 1
            correction1 = 1.0 - ADAM_BETA1**step
            correction2 = 1.0 - ADAM_BETA2**step
            for key in trainable:
                grad = grads[key[0]][key[1]]
                if clip is not None:
                    grad = np.clip(grad, -clip, clip)
                m = first_moment[key]
                v = second_moment[key]
                m *= ADAM_BETA1
                m += (1.0 - ADAM_BETA1) * grad
                v *= ADAM_BETA2
                v += (1.0 - ADAM_BETA2) * grad * grad
                param = getattr(model.layers[key[0]], key[1])
                param -= lr * (m / correction1) / (np.sqrt(v / correction2) + ADAM_EPS)
        log.epoch_losses.append(total / len(data))
        logger.debug(f"epoch {epoch + 1}/{epochs}: loss {log.epoch_losses[-1]:.6f}")
    return log


def accuracy(model: Model, x: Tensor, labels: npt.NDArray[np.int64]) -> float:
    if len(x) == 0:
        raise DomainValueError("Accuracy of an empty set is undefined")
    return float(np.mean(predict(model, x) == np.asarray(labels)))


def he_dense(rng: SeededRng, out_features: int, in_features: int) -> Dense:
    weight = rng.normal(0.0, np.sqrt(2.0 / in_features), (out_features, in_features))
    return Dense(weight=weight, bias=np.zeros(out_features))


def he_conv(rng: SeededRng, filters: int, channels: int, kernel: int, pad: int) -> Conv2D:
    fan_in = channels * kernel * kernel
    kernels = rng.normal(0.0, np.sqrt(2.0 / fan_in), (filters, channels, kernel, kernel))
    return Conv2D(kernels=kernels, bias=np.zeros(filters), stride=1, pad=pad)


def build_mlp(rng: SeededRng, sizes: Sequence[int], bias_scale: float = 0.0) -> Model:
    """Dense/ReLU stack ``sizes[0] -> ... -> sizes[-1]``.

    ``bias_scale > 0`` draws biases from a normal of that scale instead of zeros.
    """
    if len(sizes) < 2:
        raise DomainValueError("An MLP needs an input and an output size")
    layers = []
    for position, (fan_in, fan_out) in enumerate(zip(sizes[:-1], sizes[1:])):
        dense = he_dense(rng, fan_out, fan_in)
        if bias_scale > 0.0:
            dense.bias = rng.normal(0.0, bias_scale, fan_out)
        layers.append(dense)
        if position < len(sizes) - 2:
            layers.append(ReLU())
    return Model(layers, class_count=sizes[-1], input_shape=(sizes[0],))


def build_desk_cnn(
    rng: SeededRng,
    input_shape: Tuple[int, int, int] = (1, 16, 16),
    class_count: int = 10,
    conv_channels: Sequence[int] = (8, 16),
    kernel: int = 3,
    hidden: int = 64,
) -> Model:
    """Conv/ReLU/MaxPool blocks, then a hidden dense layer and the read-out.

    Refinable sites default to every ReLU.
    """
    layers = []
    channels, height, width = input_shape
    for filters in conv_channels:
        layers += [he_conv(rng, filters, channels, kernel, kernel // 2), ReLU(), MaxPool(2, 2)]
        channels, height, width = filters, height // 2, width // 2
    layers += [Flatten(), he_dense(rng, hidden, channels * height * width), ReLU()]
    layers.append(he_dense(rng, class_count, hidden))
    return Model(layers, class_count=class_count, input_shape=input_shape)
