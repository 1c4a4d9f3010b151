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

Module: src/cleverprune/infrastructure/tensor_ops.py

Dense Tensor Arithmetic

The small set of array operations the network, attribution and benchmark
code is built from: matrix products, 2-D cross-correlation via im2col
unrolling (and its adjoint), max-pooling with deterministic tie-breaking,
and the elementwise functions and reductions used by losses and metrics.

Convolutions accept a batch axis in front: inputs are ``N x C x H x W``.
Single images are handled by the convenience wrapper ``conv2d``.

Version: 0.1.0
License: Apache 2.0
"""

from typing import Optional, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from cleverprune.domain.entities.layers import output_extent
from cleverprune.domain.errors import DimensionError, DomainValueError
from cleverprune.domain.value_objects.tensor import Tensor

__version__ = "0.1.0"


def matmul(a: Tensor, b: Tensor) -> Tensor:
    """Multiply two matrices.

    Args:
        a (Tensor): Left operand of shape ``m x k``.
        b (Tensor): Right operand of shape ``k x n``.

    Returns:
        Tensor: ``m x n`` product with ``C[i, j] = sum_p A[i, p] * B[p, j]``.

    Raises:
        DimensionError: If either operand is not a matrix or the inner
            extents disagree.

    Example:
        >>> matmul(np.eye(2), np.array([[1.0, 2.0], [3.0, 4.0]]))
        array([[1., 2.],
               [3., 4.]])
    """
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionError(f"Cannot multiply shapes {a.shape} and {b.shape}")
    return a @ b


def im2col(x: Tensor, kh: int, kw: int, stride: int, pad: int) -> Tensor:
    """Unroll sliding windows of a batched image tensor into columns.

    Args:
        x (Tensor): Input of shape ``N x C x H x W``.
        kh (int): Window height.
        kw (int): Window width.
        stride (int): Step between windows.
        pad (int): Zero padding added on every border.

    Returns:
        Tensor: ``N x (C*kh*kw) x (H'*W')`` with rows ordered channel-major,
            then kernel row, then kernel column (matching a flattened
            ``F x C x kh x kw`` kernel).

    Raises:
        DimensionError: If the window exceeds the padded input.
    """
    n, c, h, w = x.shape
    if kh > h + 2 * pad or kw > w + 2 * pad:
        raise DimensionError(
            f"Kernel {kh}x{kw} larger than padded input {h + 2 * pad}x{w + 2 * pad}"
        )
    padded = np.pad(x, ((0, 0), (0, 0), (pad, pad), (pad, pad))) if pad else x
    windows = sliding_window_view(padded, (kh, kw), axis=(2, 3))[
        :, :, ::stride, ::stride
    ]
    out_h, out_w = windows.shape[2], windows.shape[3]
    columns = windows.transpose(0, 1, 4, 5, 2, 3).reshape(n, c * kh * kw, out_h * out_w)
    return np.ascontiguousarray(columns)


def col2im(
    columns: Tensor,
    input_shape: Tuple[int, int, int, int],
    kh: int,
    kw: int,
    stride: int,
    pad: int,
) -> Tensor:
    """Adjoint of ``im2col``: scatter-add columns back onto the input grid."""
    n, c, h, w = input_shape
    out_h = output_extent(h, kh, stride, pad)
    out_w = output_extent(w, kw, stride, pad)
    blocks = columns.reshape(n, c, kh, kw, out_h, out_w)
    padded = np.zeros((n, c, h + 2 * pad, w + 2 * pad))
    for i in range(kh):
        for j in range(kw):
            padded[
                :,
                :,
                i : i + stride * out_h : stride,
                j : j + stride * out_w : stride,
            ] += blocks[:, :, i, j]
    if pad:
        return padded[:, :, pad:-pad, pad:-pad]
    return padded


def conv2d_batch(
    x: Tensor, kernels: Tensor, bias: Tensor, stride: int = 1, pad: int = 0
) -> Tuple[Tensor, Tensor]:
    """Batched cross-correlation with zero padding.

    Returns:
        Tuple[Tensor, Tensor]: The ``N x F x H' x W'`` output and the im2col
            columns, which backward passes reuse.
    """
    if x.ndim != 4 or kernels.ndim != 4 or x.shape[1] != kernels.shape[1]:
        raise DimensionError(
            f"Cannot convolve input {x.shape} with kernels {kernels.shape}"
        )
    f, _, kh, kw = kernels.shape
    columns = im2col(x, kh, kw, stride, pad)
    out_h = output_extent(x.shape[2], kh, stride, pad)
    out_w = output_extent(x.shape[3], kw, stride, pad)
    out = np.matmul(kernels.reshape(f, -1), columns) + bias[None, :, None]
    return out.reshape(x.shape[0], f, out_h, out_w), columns


def conv2d(
    image: Tensor, kernels: Tensor, bias: Tensor, stride: int = 1, pad: int = 0
) -> Tensor:
    """Cross-correlate a single ``C x H x W`` image with ``F x C x kh x kw`` kernels.

    Output extent per axis is ``floor((H + 2*pad - kh) / stride) + 1``.

    Raises:
        DimensionError: If the kernel is larger than the padded input or the
            channel counts disagree.
    """
    if image.ndim != 3:
        raise DimensionError(f"Expected a C x H x W image, got shape {image.shape}")
    out, _ = conv2d_batch(image[None], kernels, bias, stride, pad)
    return out[0]


def max_pool_batch(x: Tensor, k: int, stride: int) -> Tuple[Tensor, Tensor]:
    """Batched max-pooling over ``k x k`` windows.

    Ties resolve to the first maximal position in row-major window order.

    Returns:
        Tuple[Tensor, Tensor]: The pooled ``N x C x H' x W'`` tensor and the
            flat in-window argmax indices of the same shape.
    """
    if k > x.shape[2] or k > x.shape[3]:
        raise DimensionError(f"Pool window {k} larger than input {x.shape[2:]}")
    windows = sliding_window_view(x, (k, k), axis=(2, 3))[:, :, ::stride, ::stride]
    flat = windows.reshape(*windows.shape[:4], k * k)
    argmax = np.argmax(flat, axis=-1)
    pooled = np.take_along_axis(flat, argmax[..., None], axis=-1)[..., 0]
    return pooled, argmax


def max_pool_backward(
    grad_out: Tensor, argmax: Tensor, input_shape: Tuple[int, ...], k: int, stride: int
) -> Tensor:
    """Route pooled gradients back to the winning input positions."""
    n, c, out_h, out_w = grad_out.shape
    grad_in = np.zeros(input_shape)
    ni, ci, oh, ow = np.indices((n, c, out_h, out_w))
    rows = oh * stride + argmax // k
    cols = ow * stride + argmax % k
    np.add.at(grad_in, (ni, ci, rows, cols), grad_out)
    return grad_in


def relu(x: Tensor) -> Tensor:
    return np.maximum(x, 0.0)


def softmax(logits: Tensor, axis: int = -1) -> Tensor:
    """Numerically stable softmax; every slice along ``axis`` sums to one."""
    shifted = logits - np.max(logits, axis=axis, keepdims=True)
    exp = np.exp(shifted)
    return exp / np.sum(exp, axis=axis, keepdims=True)


def log_softmax(logits: Tensor, axis: int = -1) -> Tensor:
    shifted = logits - np.max(logits, axis=axis, keepdims=True)
    return shifted - np.log(np.sum(np.exp(shifted), axis=axis, keepdims=True))


def cross_entropy(logits: Tensor, labels: np.ndarray) -> Tensor:
    """Per-sample softmax cross-entropy for a batch of logits ``N x K``."""
    log_probs = log_softmax(logits, axis=1)
    return -log_probs[np.arange(logits.shape[0]), labels]


def reduce_sum(x: Tensor, axis: Optional[int] = None) -> Tensor:
    _require_nonempty(x, axis)
    return np.sum(x, axis=axis)


def reduce_mean(x: Tensor, axis: Optional[int] = None) -> Tensor:
    _require_nonempty(x, axis)
    return np.mean(x, axis=axis)


def l1_norm(x: Tensor) -> float:
    _require_nonempty(x, None)
    return float(np.sum(np.abs(x)))


def l2_norm(x: Tensor) -> float:
    _require_nonempty(x, None)
    return float(np.sqrt(np.sum(np.square(x))))


def _require_nonempty(x: Tensor, axis: Optional[int]) -> None:
    if x.size == 0 or (axis is not None and x.shape[axis] == 0):
        raise DomainValueError(f"Reduction over an empty axis of shape {x.shape}")
