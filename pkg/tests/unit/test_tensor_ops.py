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

Module: tests/unit/test_tensor_ops.py

Tensor Kernel Unit Tests

Checks the numerical primitives every layer is built from against direct
loop implementations and their algebraic properties.

Version: 0.1.0
License: Apache 2.0
"""

import numpy as np
import pytest

from cleverprune.domain.errors import DimensionError, DomainValueError
from cleverprune.domain.value_objects.tensor import SeededRng, as_tensor
from cleverprune.infrastructure.tensor_ops import (
    col2im,
    conv2d,
    cross_entropy,
    im2col,
    l1_norm,
    l2_norm,
    matmul,
    max_pool_batch,
    reduce_mean,
    reduce_sum,
    relu,
    softmax,
)

__version__ = "0.1.0"


def _direct_conv(image, kernels, bias, stride, pad):
    padded = np.pad(image, ((0, 0), (pad, pad), (pad, pad)))
    f, _, kh, kw = kernels.shape
    out_h = (padded.shape[1] - kh) // stride + 1
    out_w = (padded.shape[2] - kw) // stride + 1
    out = np.empty((f, out_h, out_w))
    for k in range(f):
        for i in range(out_h):
            for j in range(out_w):
                window = padded[:, i * stride : i * stride + kh, j * stride : j * stride + kw]
                out[k, i, j] = np.sum(window * kernels[k]) + bias[k]
    return out


@pytest.mark.parametrize("stride, pad", [(1, 0), (1, 1), (2, 1)])
def test_conv2d_matches_direct_loops(stride, pad):
    """Test the im2col convolution against a naive cross-correlation.

    Validates:
        - Output extent ``floor((H + 2 pad - kh) / stride) + 1``
        - Every output value, including padded borders
    """
    rng = SeededRng(11)
    image = rng.normal(size=(2, 7, 6))
    kernels = rng.normal(size=(3, 2, 3, 3))
    bias = rng.normal(size=3)

    out = conv2d(image, kernels, bias, stride, pad)

    np.testing.assert_allclose(out, _direct_conv(image, kernels, bias, stride, pad), atol=1e-12)


def test_col2im_is_adjoint_of_im2col():
    """<im2col(x), y> equals <x, col2im(y)> for any x and y."""
    rng = SeededRng(12)
    x = rng.normal(size=(2, 3, 6, 5))
    columns = im2col(x, 3, 3, 1, 1)
    y = rng.normal(size=columns.shape)

    lhs = np.sum(columns * y)
    rhs = np.sum(x * col2im(y, x.shape, 3, 3, 1, 1))

    assert lhs == pytest.approx(rhs, rel=1e-10)


def test_max_pool_ties_pick_first_position():
    x = np.ones((1, 1, 2, 2))
    pooled, argmax = max_pool_batch(x, 2, 2)
    assert pooled[0, 0, 0, 0] == 1.0
    assert argmax[0, 0, 0, 0] == 0


def test_softmax_rows_sum_to_one_for_large_logits():
    probs = softmax(np.array([[1000.0, 1000.0], [-5.0, 3.0]]))
    np.testing.assert_allclose(probs.sum(axis=1), [1.0, 1.0])
    np.testing.assert_allclose(probs[0], [0.5, 0.5])


def test_cross_entropy_of_uniform_logits():
    loss = cross_entropy(np.zeros((2, 4)), np.array([0, 3]))
    np.testing.assert_allclose(loss, [np.log(4.0)] * 2)


def test_matmul_rejects_mismatched_extents():
    with pytest.raises(DimensionError):
        matmul(np.ones((2, 3)), np.ones((2, 3)))


def test_matmul_is_associative():
    rng = SeededRng(21)
    a, b, c = rng.normal(size=(4, 5)), rng.normal(size=(5, 3)), rng.normal(size=(3, 6))
    left = matmul(matmul(a, b), c)
    right = matmul(a, matmul(b, c))
    np.testing.assert_allclose(left, right, rtol=1e-9, atol=1e-12)


def test_norms_and_relu_examples():
    x = np.array([3.0, -4.0])
    assert l1_norm(x) == 7.0
    assert l2_norm(x) == 5.0
    np.testing.assert_array_equal(relu(np.array([-1.0, 0.0, 2.0])), [0.0, 0.0, 2.0])


def test_reductions_along_an_axis():
    x = np.arange(6.0).reshape(2, 3)
    np.testing.assert_array_equal(reduce_sum(x, axis=0), [3.0, 5.0, 7.0])
    np.testing.assert_array_equal(reduce_mean(x, axis=1), [1.0, 4.0])
    assert reduce_sum(x) == 15.0


def test_reductions_reject_empty_axes():
    with pytest.raises(DomainValueError):
        reduce_mean(np.zeros((0, 3)), axis=0)
    with pytest.raises(DomainValueError):
        l1_norm(np.zeros(0))


def test_as_tensor_rejects_empty_extents():
    with pytest.raises(DimensionError):
        as_tensor(np.zeros((0, 3)))


def test_seeded_streams_are_reproducible_and_independent():
    """Equal seeds give equal bytes; named children diverge from each other."""
    assert SeededRng(5).stream_bytes(32) == SeededRng(5).stream_bytes(32)
    assert SeededRng(5).child("init").stream_bytes(32) == SeededRng(5).child("init").stream_bytes(32)
    assert SeededRng(5).child("init").stream_bytes(32) != SeededRng(5).child("shuffle").stream_bytes(32)


@pytest.mark.parametrize("seed", [-1, 2**64])
def test_seeded_rng_rejects_out_of_range_seeds(seed):
    with pytest.raises(DomainValueError):
        SeededRng(seed)
