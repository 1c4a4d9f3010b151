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

Module: tests/unit/test_network.py

Model and Network Unit Tests

Covers model construction rules, forward evaluation, exact backpropagation
(checked by central finite differences) and seeded Adam training.

Version: 0.1.0
License: Apache 2.0
"""

import numpy as np
import pytest

from cleverprune.domain.entities.layers import Dense, ReLU, Scale
from cleverprune.domain.entities.model import Model
from cleverprune.domain.errors import DimensionError, DomainValueError
from cleverprune.domain.value_objects.tensor import SeededRng
from cleverprune.infrastructure.network import (
    Label,
    Logit,
    build_mlp,
    forward,
    forward_batch,
    forward_with_trace,
    gradients,
    train,
)

__version__ = "0.1.0"


def _numeric_gradient(model, x, target, index, name, h=1e-6):
    param = getattr(model.layers[index], name)
    grad = np.zeros_like(param)
    for pos in np.ndindex(param.shape):
        original = param[pos]
        param[pos] = original + h
        up = forward(model, x)[target]
        param[pos] = original - h
        down = forward(model, x)[target]
        param[pos] = original
        grad[pos] = (up - down) / (2 * h)
    return grad


def test_model_rejects_mismatched_layer_shapes():
    layers = [Dense(np.ones((4, 3)), np.zeros(4)), ReLU(), Dense(np.ones((2, 5)), np.zeros(2))]
    with pytest.raises(DimensionError):
        Model(layers, class_count=2, input_shape=(3,))


def test_model_rejects_site_that_is_not_an_activation(mlp):
    with pytest.raises(DomainValueError):
        Model(mlp.layers, mlp.class_count, mlp.input_shape, refinable_sites=[0])


def test_default_sites_are_every_relu(mlp, cnn):
    assert mlp.refinable_sites == [1, 3]
    assert cnn.refinable_sites == [1, 4, 8]


def test_inserting_a_layer_shifts_later_sites(mlp):
    refined = mlp.with_layer_inserted(2, Scale(np.ones(8)))
    assert refined.refinable_sites == [1, 4]
    assert len(mlp.layers) == 5


def test_trace_records_every_layer(cnn, images):
    logits, trace = forward_with_trace(cnn, images[0])
    assert trace.matches(cnn)
    np.testing.assert_allclose(logits, forward_batch(cnn, images[:1])[0])


def test_forward_rejects_wrong_input_shape(mlp):
    with pytest.raises(DimensionError):
        forward(mlp, np.zeros(5))


@pytest.mark.parametrize("index, name", [(0, "weight"), (2, "bias"), (4, "weight")])
def test_logit_gradients_match_finite_differences(mlp, vectors, index, name):
    """Test exact parameter gradients of one logit on a dense network.

    Validates:
        - Backward sweep through Dense and ReLU layers
        - Weight and bias gradients of hidden and output layers
    """
    x = vectors[0]
    analytic = gradients(mlp, x, Logit(1))[index][name]
    numeric = _numeric_gradient(mlp, x, 1, index, name)
    np.testing.assert_allclose(analytic, numeric, atol=1e-6)


def test_conv_gradients_match_finite_differences(cnn, images):
    x = images[0]
    analytic = gradients(cnn, x, Logit(2))[0]["kernels"]
    numeric = _numeric_gradient(cnn, x, 2, 0, "kernels")
    np.testing.assert_allclose(analytic, numeric, atol=1e-5)


def test_gradient_target_must_be_a_class(mlp, vectors):
    with pytest.raises(DomainValueError):
        gradients(mlp, vectors[0], Label(3))


def test_training_is_reproducible_and_lowers_the_loss(vectors):
    """Two runs with equal seeds end with identical weights.

    Validates:
        - Per-epoch shuffles drawn from the given stream
        - Loss decreases on a learnable toy problem
    """
    labels = (vectors[:, 0] > vectors[:, 1]).astype(np.int64)
    first = build_mlp(SeededRng(9), [6, 16, 2])
    second = build_mlp(SeededRng(9), [6, 16, 2])

    log = train(first, vectors, labels, 30, 1e-2, 5, SeededRng(1))
    train(second, vectors, labels, 30, 1e-2, 5, SeededRng(1))

    assert len(log.epoch_losses) == 30
    assert log.epoch_losses[-1] < log.epoch_losses[0]
    np.testing.assert_array_equal(first.layers[0].weight, second.layers[0].weight)


def test_zero_epochs_leave_the_model_untouched(mlp, vectors):
    before = mlp.copy()
    log = train(mlp, vectors, np.zeros(len(vectors), dtype=np.int64), 0, 1e-3, 4, SeededRng(0))
    assert log.final_loss is None
    np.testing.assert_array_equal(before.layers[0].weight, mlp.layers[0].weight)


def test_training_rejects_out_of_range_labels(mlp, vectors):
    with pytest.raises(DomainValueError):
        train(mlp, vectors, np.full(len(vectors), 3), 1, 1e-3, 4, SeededRng(0))
