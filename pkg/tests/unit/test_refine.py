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

Module: tests/unit/test_refine.py

Refinement Unit Tests

Exercises the closed-form refinement primitives (soft-pruning multipliers,
per-edge refits, PCA rotation, last-layer ridge solutions) and the
registered refiners built on them.

Version: 0.1.0
License: Apache 2.0
"""

import numpy as np
import pytest

from cleverprune.domain.entities.activation_stats import PcaBasis, SiteStats
from cleverprune.domain.entities.dataset import Dataset
from cleverprune.domain.entities.layers import PcaScale, Scale
from cleverprune.domain.errors import (
    DimensionError,
    DomainValueError,
    NumericalError,
    PreconditionError,
)
from cleverprune.domain.value_objects.attribution_method import GI
from cleverprune.domain.value_objects.tensor import SeededRng
from cleverprune.infrastructure.network import build_mlp, capture_batch, forward_batch, predict
from cleverprune.infrastructure.refine import (
    apply_pca_egem,
    apply_scaling,
    apply_weight_scaling,
    collect_stats,
    egem_coefficients,
    egem_full_factors,
    egem_full_weights,
    egem_objective,
    fit_pca,
    pca_coefficients,
    rgem_refit,
    rgem_weights,
    ridge_refit,
    site_rows,
)
from cleverprune.infrastructure.refiners import get_refiner, supported_methods

__version__ = "0.1.0"


@pytest.fixture
def cnn_data(cnn, images):
    return Dataset(
        images=images,
        labels=predict(cnn, images),
        artifact_flags=np.zeros(len(images), dtype=bool),
        class_count=3,
    )


def test_egem_coefficients_example():
    np.testing.assert_allclose(egem_coefficients(np.array([1.0, 0.0]), 1.0), [0.5, 0.0])


def test_zero_lambda_keeps_every_unit():
    np.testing.assert_array_equal(egem_coefficients(np.array([0.0, 2.0]), 0.0), [1.0, 1.0])


def test_negative_lambda_is_rejected():
    with pytest.raises(DomainValueError):
        egem_coefficients(np.array([1.0]), -1.0)


def test_collect_stats_second_moments(mlp, vectors):
    stats = collect_stats(mlp, vectors)
    hidden = capture_batch(mlp, vectors, [1])[1]
    np.testing.assert_allclose(stats.site(1).unit_second_moment, np.mean(hidden**2, axis=0))
    assert stats.site(1).granularity == "unit"
    assert stats.gram.shape == (5, 5)


def test_collect_stats_sums_feature_maps_per_channel(cnn, images):
    stats = collect_stats(cnn, images, sites=[4])
    maps = capture_batch(cnn, images, [4])[4]
    expected = np.mean(maps.sum(axis=(2, 3)) ** 2, axis=0)
    np.testing.assert_allclose(stats.site(4).unit_second_moment, expected)
    assert stats.site(4).granularity == "channel"


@pytest.mark.parametrize("site", [1, 4, 8])
def test_scale_layer_equals_weight_scaling(cnn, images, site):
    """Test the two equivalent forms of per-unit soft pruning.

    Validates:
        - Inserted Scale layer and scaled successor weights agree
        - MaxPool and Flatten between the site and its successor commute
          with nonnegative per-channel multipliers
    """
    channels = cnn.layer_shapes[site][0]
    c = SeededRng(site).uniform(0.0, 1.0, channels)

    inserted = apply_scaling(cnn, site, c)
    in_weights = apply_weight_scaling(cnn, site, c)

    assert isinstance(inserted.layers[site + 1], Scale)
    assert len(in_weights.layers) == len(cnn.layers)
    np.testing.assert_allclose(
        forward_batch(inserted, images), forward_batch(in_weights, images), atol=1e-12
    )


def test_weight_scaling_composes_with_an_existing_scale(cnn, images):
    """Test weight-space pruning behind an inserted Scale layer.

    Validates:
        - The Scale is traversed and both multipliers act on the output
        - A PcaScale between the site and its successor is refused
    """
    first = SeededRng(30).uniform(0.0, 1.0, 8)
    second = SeededRng(31).uniform(0.0, 1.0, 8)

    stacked = apply_weight_scaling(apply_scaling(cnn, 8, first), 8, second)
    combined = apply_scaling(cnn, 8, first * second)
    np.testing.assert_allclose(
        forward_batch(stacked, images), forward_batch(combined, images), atol=1e-12
    )

    rows = site_rows(capture_batch(cnn, images, [8])[8])
    with_pca = apply_pca_egem(cnn, 8, fit_pca(rows), 0.5, rows)
    with pytest.raises(PreconditionError):
        apply_weight_scaling(with_pca, 8, second)


def test_scalings_compose_into_one_layer(mlp, vectors):
    c = np.full(8, 0.5)
    twice = apply_scaling(apply_scaling(mlp, 1, c), 1, c)
    assert len(twice.layers) == len(mlp.layers) + 1
    np.testing.assert_allclose(twice.layers[2].c, np.full(8, 0.25))


def test_scaling_rejects_wrong_length(mlp):
    with pytest.raises(DimensionError):
        apply_scaling(mlp, 1, np.ones(3))


def test_per_edge_refit_minimises_its_objective(mlp, vectors):
    """The closed-form per-edge weights beat random perturbations of themselves."""
    labels = predict(mlp, vectors)
    stats = collect_stats(mlp, vectors, sites=[3], labels=labels, message_method=GI())
    site = stats.site(3)
    w_old = mlp.layers[4].weight
    lam = 0.3

    best = egem_full_weights(w_old, site, lam)
    optimum = egem_objective(best, w_old, site, lam)
    rng = SeededRng(8)
    for _ in range(5):
        perturbed = best + 1e-3 * rng.normal(size=best.shape)
        assert egem_objective(perturbed, w_old, site, lam) >= optimum

    factors = egem_full_factors(site, lam)
    assert np.all((factors >= 0.0) & (factors <= 1.0))


def test_per_edge_refit_with_constant_messages_is_per_unit_scaling():
    """Constant messages reduce the per-edge factors to ``E[a_i^2] / (E[a_i^2] + lambda)``."""
    rng = SeededRng(14)
    moments = rng.uniform(0.0, 2.0, 5)
    d_squared = rng.uniform(0.5, 3.0, 3)
    stats = SiteStats(
        site=1,
        granularity="unit",
        unit_second_moment=moments,
        weighted_second_moments=np.outer(moments, d_squared),
        message_second_moment=d_squared,
    )
    w_old = rng.normal(size=(3, 5))
    for lam in (0.0, 0.1, 1.0, 10.0):
        expected = w_old * egem_coefficients(moments, lam)[None, :]
        np.testing.assert_allclose(egem_full_weights(w_old, stats, lam), expected, atol=1e-12)


def test_pca_basis_is_orthonormal_and_sorted(mlp, vectors):
    rows = site_rows(capture_batch(mlp, vectors, [1])[1])
    basis = fit_pca(rows)
    np.testing.assert_allclose(basis.components.T @ basis.components, np.eye(8), atol=1e-10)
    assert np.all(np.diff(basis.eigenvalues) <= 0.0)
    np.testing.assert_allclose(basis.reconstruct(basis.project(rows)), rows, atol=1e-10)


def test_pca_coefficients_follow_eigenvalues(mlp, vectors):
    rows = site_rows(capture_batch(mlp, vectors, [1])[1])
    basis = fit_pca(rows)
    expected = basis.eigenvalues / (basis.eigenvalues + 1.0)
    np.testing.assert_allclose(pca_coefficients(basis, rows, 1.0), expected, atol=1e-10)


def test_pca_refinement_at_zero_lambda_is_identity(mlp, vectors):
    rows = site_rows(capture_batch(mlp, vectors, [1])[1])
    refined = apply_pca_egem(mlp, 1, fit_pca(rows), 0.0, rows)
    assert isinstance(refined.layers[2], PcaScale)
    np.testing.assert_allclose(
        forward_batch(refined, vectors), forward_batch(mlp, vectors), atol=1e-10
    )


def test_pca_refinement_at_huge_lambda_collapses_to_the_mean(mlp, vectors):
    rows = site_rows(capture_batch(mlp, vectors, [1])[1])
    basis = fit_pca(rows)
    refined = apply_pca_egem(mlp, 1, basis, 1e12, rows)

    collapsed = capture_batch(refined, vectors, [2])[2]
    np.testing.assert_allclose(collapsed, np.tile(basis.mean, (len(vectors), 1)), atol=1e-4)


def test_pca_basis_rejects_non_orthonormal_components():
    components = np.array([[1.0, 0.0], [0.0, 1.0 + 1e-6]])
    with pytest.raises(DomainValueError):
        PcaBasis(components=components, mean=np.zeros(2), eigenvalues=np.array([2.0, 1.0]))


def test_pca_basis_rejects_negative_eigenvalues():
    with pytest.raises(DomainValueError):
        PcaBasis(components=np.eye(2), mean=np.zeros(2), eigenvalues=np.array([1.0, -1e-3]))


def test_pca_basis_rejects_ascending_eigenvalues():
    with pytest.raises(DomainValueError):
        PcaBasis(components=np.eye(2), mean=np.zeros(2), eigenvalues=np.array([1.0, 2.0]))


def test_pca_basis_accepts_a_rotation():
    angle = 0.3
    rotation = np.array([[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]])
    basis = PcaBasis(components=rotation, mean=np.ones(2), eigenvalues=np.array([3.0, 3.0]))
    assert basis.rank == 2


def test_rgem_weights_with_identity_covariance():
    w_old = np.array([[1.0, -2.0], [3.0, 0.5]])
    np.testing.assert_allclose(rgem_weights(np.eye(2), w_old, 1.0), w_old / 2.0)


def test_rgem_at_zero_lambda_reproduces_the_readout(vectors):
    linear = build_mlp(SeededRng(5), [6, 3], bias_scale=0.2)
    refit = rgem_refit(linear, vectors, 0.0)
    np.testing.assert_allclose(refit.layers[0].weight, linear.layers[0].weight, atol=1e-8)
    np.testing.assert_allclose(refit.layers[0].bias, linear.layers[0].bias, atol=1e-8)


def test_ridge_at_zero_lambda_is_least_squares(vectors):
    linear = build_mlp(SeededRng(5), [6, 3])
    labels = np.arange(len(vectors)) % 3
    refit = ridge_refit(linear, vectors, labels, 0.0)

    design = np.hstack([vectors, np.ones((len(vectors), 1))])
    solution, *_ = np.linalg.lstsq(design, np.eye(3)[labels], rcond=None)
    np.testing.assert_allclose(refit.layers[0].weight, solution[:-1].T, atol=1e-8)
    np.testing.assert_allclose(refit.layers[0].bias, solution[-1], atol=1e-8)


def test_ridge_at_huge_lambda_keeps_only_the_bias(vectors):
    """Test the heavily penalised ridge read-out.

    Validates:
        - Every read-out weight vanishes
        - The unpenalised bias falls back to the class frequencies
        - Balanced labels leave all logits tied
    """
    linear = build_mlp(SeededRng(5), [6, 3])
    data = vectors[:18]
    labels = np.arange(len(data)) % 3
    refit = ridge_refit(linear, data, labels, 1e12)

    assert np.max(np.abs(refit.layers[0].weight)) < 1e-9
    np.testing.assert_allclose(refit.layers[0].bias, np.full(3, 1.0 / 3.0), atol=1e-8)
    logits = forward_batch(refit, data)
    assert np.max(np.ptp(logits, axis=1)) < 1e-8


def test_rgem_singular_features_need_positive_lambda(cnn, images):
    with pytest.raises(NumericalError):
        rgem_refit(cnn, images, 0.0)
    assert rgem_refit(cnn, images, 1e-2).layers[-1].weight.shape == (3, 8)


def test_registry_lists_every_method():
    assert supported_methods() == [
        "original",
        "egem",
        "egem-full",
        "pca-egem",
        "rgem",
        "ridge",
        "retrain",
    ]
    with pytest.raises(DomainValueError):
        get_refiner("dropout")


@pytest.mark.parametrize(
    "method, strength",
    [("original", 0.0), ("egem", 1.0), ("egem-full", 1.0), ("pca-egem", 1.0), ("retrain", 0)],
)
def test_weakest_strength_keeps_the_function(cnn, cnn_data, method, strength):
    """Test that each refiner's weakest grid point leaves outputs unchanged.

    Validates:
        - alpha = 1 resolves to lambda = 0 at every site
        - Zero retraining epochs return an unchanged copy
        - The original model is never modified
    """
    before = forward_batch(cnn, cnn_data.images)
    plan, refined = get_refiner(method).refine(cnn, cnn_data, strength)

    assert plan.method == method
    assert all(lam == 0.0 for lam in plan.lambdas.values())
    np.testing.assert_allclose(forward_batch(refined, cnn_data.images), before, atol=1e-9)
    np.testing.assert_array_equal(forward_batch(cnn, cnn_data.images), before)


def test_egem_meets_the_last_site_target(cnn, cnn_data):
    plan, refined = get_refiner("egem").refine(cnn, cnn_data, 0.2)

    assert plan.sites == (1, 4, 8)
    assert plan.lambdas[1] == 0.0
    last_scale = refined.layers[refined.refinable_sites[-1] + 1]
    assert isinstance(last_scale, Scale)
    assert np.mean(last_scale.c) <= 0.2 + 1e-9


def test_retrain_rejects_fractional_epochs(cnn, cnn_data):
    with pytest.raises(DomainValueError):
        get_refiner("retrain").refine(cnn, cnn_data, 2.5)
