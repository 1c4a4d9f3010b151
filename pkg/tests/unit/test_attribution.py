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

Module: tests/unit/test_attribution.py

Attribution Unit Tests

Validates Gradient x Input, Integrated Gradients and LRP against the
identities they must satisfy: conservation on bias-free ReLU networks,
agreement of GI and LRP-0 there, and IG completeness.

Version: 0.1.0
License: Apache 2.0
"""

import numpy as np
import pytest

from cleverprune.domain.entities.relevance import INPUT_LAYER
from cleverprune.domain.errors import DomainValueError, PreconditionError
from cleverprune.domain.value_objects.attribution_method import (
    GI,
    IG,
    LRP,
    attribution_from_name,
)
from cleverprune.infrastructure.attribution import (
    following_dense,
    gradient_x_input,
    integrated_gradients,
    lrp,
    message_factor_batch,
    message_factors,
    relevance_at,
)
from cleverprune.domain.value_objects.tensor import SeededRng
from cleverprune.infrastructure.network import build_mlp, forward
from cleverprune.infrastructure.refine import apply_scaling

__version__ = "0.1.0"


def test_gradient_x_input_is_conservative_without_biases(bias_free_mlp, vectors):
    """A bias-free ReLU network is positively homogeneous, so GI sums to the logit."""
    x = vectors[2]
    relevance = gradient_x_input(bias_free_mlp, x, target=0)
    assert relevance.shape == x.shape
    assert relevance.sum() == pytest.approx(forward(bias_free_mlp, x)[0], rel=1e-10)


@pytest.mark.parametrize("fixture", ["bias_free_mlp", "cnn"])
def test_lrp_zero_matches_gradient_x_input_without_biases(request, fixture, vectors, images):
    """Test LRP-0 against GI on bias-free ReLU networks.

    Validates:
        - Dense, Conv2D, MaxPool and Flatten propagation rules
        - Conservation of the explained logit at every layer
    """
    model = request.getfixturevalue(fixture)
    x = vectors[3] if fixture == "bias_free_mlp" else images[1]
    relevance = lrp(model, x, target=1, method=LRP())

    np.testing.assert_allclose(
        relevance[INPUT_LAYER], gradient_x_input(model, x, target=1), atol=1e-10
    )
    logit = forward(model, x)[1]
    for total in relevance.totals().values():
        assert total == pytest.approx(logit, rel=1e-8, abs=1e-10)


def test_integrated_gradients_completeness(mlp, vectors):
    x = vectors[4]
    relevance = integrated_gradients(mlp, x, target=2, steps=512)
    expected = forward(mlp, x)[2] - forward(mlp, np.zeros_like(x))[2]
    assert relevance.sum() == pytest.approx(expected, abs=1e-2)


def test_integrated_gradients_error_shrinks_as_steps_double(mlp, vectors):
    """Test convergence of the midpoint rule on a network with biases.

    Validates:
        - The completeness error at 1024 steps is far below the coarse ones
        - Coarse step counts average a larger error than fine ones
    """
    x = vectors[4]
    expected = forward(mlp, x)[2] - forward(mlp, np.zeros_like(x))[2]
    errors = [
        abs(integrated_gradients(mlp, x, target=2, steps=2**k).sum() - expected)
        for k in range(11)
    ]

    assert errors[-1] <= max(errors[:3]) + 1e-12
    assert sum(errors[-3:]) <= sum(errors[:3]) + 1e-12
    assert errors[-1] < 1e-2


@pytest.mark.parametrize("method", [GI(), IG(32), LRP(), LRP(gamma=0.25)])
def test_attribution_ignores_an_identity_scale(bias_free_mlp, vectors, method):
    x = vectors[3]
    scaled = apply_scaling(bias_free_mlp, 1, np.ones(8))
    before = relevance_at(bias_free_mlp, x, 0, None, method)
    after = relevance_at(scaled, x, 0, None, method)
    np.testing.assert_allclose(after, before, atol=1e-9)


def test_lrp_gamma_suppresses_negative_contributions():
    """Two inputs feed one logit through weights 2 and -1.

    LRP-gamma gives ``R = [2 + 2g, -1] / (1 + 2g)``, so the share of the
    negative edge, ``1 / (3 + 2g)``, shrinks as gamma grows.
    """
    model = build_mlp(SeededRng(0), [2, 1])
    model.layers[0].weight = np.array([[2.0, -1.0]])
    x = np.ones(2)

    shares = []
    for gamma in (0.0, 0.25, 1.0, 4.0):
        relevance = lrp(model, x, target=0, method=LRP(gamma=gamma))[INPUT_LAYER]
        np.testing.assert_allclose(
            relevance, np.array([2.0 + 2.0 * gamma, -1.0]) / (1.0 + 2.0 * gamma), atol=1e-12
        )
        shares.append(abs(relevance[1]) / np.sum(np.abs(relevance)))
    assert all(later < earlier for earlier, later in zip(shares, shares[1:]))


def test_single_step_ig_is_gi_at_the_midpoint(bias_free_mlp, vectors):
    """With one step IG evaluates the gradient at half the input."""
    x = vectors[5]
    ig = integrated_gradients(bias_free_mlp, x, target=0, steps=1)
    gi_half = gradient_x_input(bias_free_mlp, 0.5 * x, target=0)
    np.testing.assert_allclose(ig, 2.0 * gi_half, atol=1e-12)


def test_relevance_at_hidden_layer_dispatches_by_method(mlp, vectors):
    x = vectors[6]
    gi = relevance_at(mlp, x, 0, 3, GI())
    assert gi.shape == (5,)
    np.testing.assert_allclose(gi, gradient_x_input(mlp, x, 0, 3))
    lrp_map = relevance_at(mlp, x, 0, 3, LRP(epsilon=1e-9))
    assert lrp_map.shape == (5,)


@pytest.mark.parametrize("method", [GI(), LRP(gamma=0.25, epsilon=1e-6)])
def test_message_factors_decompose_unit_relevance(mlp, vectors, method):
    """Summing edge messages over outgoing edges recovers the unit relevance."""
    x = vectors[7]
    factors = message_factors(mlp, x, target=1, layer=1, method=method)
    expected = relevance_at(mlp, x, 1, 1, method)

    np.testing.assert_allclose(factors.unit_relevance(), expected, atol=1e-10)
    np.testing.assert_allclose(factors.edge_messages().sum(axis=1), expected, atol=1e-10)


def test_message_factor_batch_stacks_samples(mlp, vectors):
    a, d, dense_index = message_factor_batch(mlp, vectors[:4], np.array([0, 1, 2, 0]), 3)
    assert dense_index == 4
    assert a.shape == (4, 5)
    assert d.shape == (4, 3)


def test_following_dense_needs_a_dense_successor(cnn):
    assert following_dense(cnn, 8) == 9
    with pytest.raises(PreconditionError):
        following_dense(cnn, 4)


def test_attribution_rejects_invalid_target(mlp, vectors):
    with pytest.raises(DomainValueError):
        gradient_x_input(mlp, vectors[0], target=3)


@pytest.mark.parametrize("name, expected", [("gi", GI()), ("IG", IG(64)), ("lrp", LRP())])
def test_attribution_from_name(name, expected):
    assert attribution_from_name(name) == expected


def test_lrp_rejects_negative_gamma():
    with pytest.raises(DomainValueError):
        LRP(gamma=-1.0)
