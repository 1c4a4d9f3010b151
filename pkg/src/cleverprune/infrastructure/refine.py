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

Module: src/cleverprune/infrastructure/refine.py

Refinement Rules

Closed-form exposure minimization and the last-layer refits it is compared
against. Everything here operates on statistics gathered from the
available data:

    soft pruning        c_i = E[a_i^2] / (E[a_i^2] + lambda)
    per-edge pruning    w_ij = E[a_i^2 d_j^2] / (E[a_i^2 d_j^2] + lambda E[d_j^2]) w_ij_old
    PCA soft pruning    c_k = E[h_k^2] / (E[h_k^2] + lambda),  h = U^T (a - a_bar)
    response refit      w = (Sigma + lambda I)^-1 Sigma w_old
    ridge read-out      w = (X^T X + lambda I)^-1 X^T Y

At convolutional sites a channel's activations are summed over space before
squaring, and the resulting multiplier scales the whole feature map.

Last-layer refits append a constant feature for the bias and leave it out
of the penalty. Lambda acts on the sample-averaged Gram matrix.

Version: 0.1.0
License: Apache 2.0
"""

import copy
import logging
from typing import Optional, Sequence

import numpy as np
import numpy.typing as npt

from cleverprune.domain.entities.activation_stats import (
    ActivationStats,
    PcaBasis,
    SiteStats,
)
from cleverprune.domain.entities.layers import (
    Conv2D,
    Dense,
    Flatten,
    MaxPool,
    PcaScale,
    Scale,
)
from cleverprune.domain.entities.model import Model
from cleverprune.domain.errors import (
    DimensionError,
    DomainValueError,
    NumericalError,
    PreconditionError,
)
from cleverprune.domain.value_objects.attribution_method import AttributionMethod
from cleverprune.domain.value_objects.tensor import SeededRng, Tensor
from cleverprune.infrastructure.attribution import message_factor_batch
from cleverprune.infrastructure.network import capture_batch, train
from cleverprune.infrastructure.tensor_ops import reduce_sum

__version__ = "0.1.0"

logger = logging.getLogger(__name__)

CONDITION_LIMIT = 1e12
STATS_CHUNK = 256


def _check_lambda(lam: float) -> None:
    if not np.isfinite(lam) or lam < 0.0:
        raise DomainValueError(f"lambda must be finite and >= 0, got {lam}")


def _check_site(model: Model, site: int) -> None:
    if site not in model.refinable_sites:
        raise DomainValueError(
            f"Layer {site} is not a refinable site (sites: {model.refinable_sites})"
        )


def site_rows(activations: Tensor) -> Tensor:
    """Activation vectors of a site: one row per sample, or per sample and position on feature maps."""
    if activations.ndim == 4:
        return activations.transpose(0, 2, 3, 1).reshape(-1, activations.shape[1])
    return activations.reshape(activations.shape[0], -1)


def unit_scores(activations: Tensor) -> Tensor:
    """Per-sample unit values: spatial sums for feature maps."""
    if activations.ndim == 4:
        return activations.sum(axis=(2, 3))
    return activations.reshape(activations.shape[0], -1)


def collect_stats(
    model: Model,
    data: Tensor,
    sites: Optional[Sequence[int]] = None,
    labels: Optional[npt.NDArray[np.int64]] = None,
    message_method: Optional[AttributionMethod] = None,
) -> ActivationStats:
    """Second moments at the requested sites and the last-layer Gram matrix.

    Args:
        model (Model): Model whose activations are measured.
        data (Tensor): Available data, ``N x input_shape``.
        sites (Optional[Sequence[int]]): Refinable sites; all by default.
        labels (Optional[ndarray]): Explained outputs per sample, needed for
            the weighted moments.
        message_method (Optional[AttributionMethod]): When given together
            with ``labels``, also gathers ``E[a_i^2 d_j^2]`` and ``E[d_j^2]``
            at sites feeding a dense layer.

    Raises:
        DomainValueError: On empty data or a site that is not refinable.
    """
    if len(data) == 0:
        raise DomainValueError("Statistics need at least one sample")
    sites = list(model.refinable_sites if sites is None else sites)
    for site in sites:
        _check_site(model, site)
    feature_layer = model.last_dense_index() - 1

    n = len(data)
    moments = {site: 0.0 for site in sites}
    gram = 0.0
    for begin in range(0, n, STATS_CHUNK):
        chunk = data[begin : begin + STATS_CHUNK]
        wanted = sites + ([feature_layer] if feature_layer >= 0 else [])
        captured = capture_batch(model, chunk, wanted) if wanted else {}
        for site in sites:
            moments[site] = moments[site] + reduce_sum(unit_scores(captured[site]) ** 2, axis=0)
        features = captured[feature_layer] if feature_layer >= 0 else chunk
        features = features.reshape(len(chunk), -1)
        gram = gram + features.T @ features

    stats = ActivationStats(sample_count=n, gram=gram / n)
    for site in sites:
        activation_ndim = len(model.layer_shapes[site])
        stats.sites[site] = SiteStats(
            site=site,
            granularity="channel" if activation_ndim == 3 else "unit",
            unit_second_moment=moments[site] / n,
        )

    if message_method is not None and labels is not None:
        for site in sites:
            try:
                a, d, _ = message_factor_batch(model, data, labels, site, message_method)
            except PreconditionError:
                logger.debug(f"Site {site} has no dense successor; skipping weighted moments")
                continue
            stats.sites[site].weighted_second_moments = (a**2).T @ (d**2) / n
            stats.sites[site].message_second_moment = np.mean(d**2, axis=0)
    return stats


def egem_coefficients(moments, lam: float) -> Tensor:
    """Soft-pruning multipliers ``E[a^2] / (E[a^2] + lambda)``.

    ``lambda = 0`` yields 1 for every unit, including dead ones.

    Example:
        >>> egem_coefficients(np.array([1.0, 0.0]), 1.0)
        array([0.5, 0. ])
    """
    _check_lambda(lam)
    m = moments.unit_second_moment if isinstance(moments, SiteStats) else np.asarray(moments)
    if lam == 0.0:
        return np.ones_like(m, dtype=np.float64)
    return m / (m + lam)


def egem_full_factors(stats: SiteStats, lam: float) -> Tensor:
    """``out x in`` per-edge multipliers ``E[a^2 d^2] / (E[a^2 d^2] + lambda E[d^2])``.

    Edges whose statistics vanish entirely keep a factor of 1.
    """
    _check_lambda(lam)
    stats.require_message_moments()
    numerator = stats.weighted_second_moments.T
    denominator = numerator + lam * stats.message_second_moment[:, None]
    return np.divide(
        numerator, denominator, out=np.ones_like(numerator), where=denominator > 0.0
    )


def egem_full_weights(w_old: Tensor, stats: SiteStats, lam: float) -> Tensor:
    """Per-edge closed form for the weights of the dense layer after a site.

    Args:
        w_old (Tensor): ``out x in`` weights of the following dense layer.
        stats (SiteStats): Site statistics carrying the weighted moments.
        lam (float): Exposure penalty.

    Raises:
        PreconditionError: If the weighted moments were not collected.
        DimensionError: If they do not match ``w_old``.
    """
    factor = egem_full_factors(stats, lam)
    if factor.shape != w_old.shape:
        raise DimensionError(
            f"Weighted moments {factor.shape} do not match weights {w_old.shape}"
        )
    return factor * w_old


def egem_objective(
    w: Tensor, w_old: Tensor, stats: SiteStats, lam: float
) -> float:
    """Per-edge explanation-preservation plus exposure objective.

    ``sum_ij (w_ij - w_old_ij)^2 E[a_i^2 d_j^2] + lambda w_ij^2 E[d_j^2]``,
    which ``egem_full_weights`` minimizes.
    """
    stats.require_message_moments()
    weighted = stats.weighted_second_moments.T
    fidelity = np.sum((w - w_old) ** 2 * weighted)
    exposure = lam * np.sum(w**2 * stats.message_second_moment[:, None])
    return float(fidelity + exposure)


def _channel_count(model: Model, site: int) -> int:
    return model.layer_shapes[site][0]


def apply_scaling(model: Model, site: int, c: Tensor) -> Model:
    """Soft-prune the output of ``site`` with multipliers ``c``.

    Composes into a Scale already following the site, otherwise inserts one
    directly after it. On feature maps ``c`` holds one value per channel.

    Raises:
        DomainValueError: If ``c`` leaves [0, 1] or the site is not refinable.
        DimensionError: If ``c`` has the wrong length.
    """
    _check_site(model, site)
    c = np.asarray(c, dtype=np.float64)
    if c.shape != (_channel_count(model, site),):
        raise DimensionError(
            f"Site {site} needs {_channel_count(model, site)} multipliers, got {c.shape}"
        )
    scale = Scale(c.copy())
    start, stop = model.refinement_tail(site)
    for index in range(start, stop):
        existing = model.layers[index]
        if isinstance(existing, Scale):
            return model.with_layer_replaced(index, Scale(existing.c * scale.c))
    return model.with_layer_inserted(site + 1, scale)


def apply_weight_scaling(model: Model, site: int, c: Tensor) -> Model:
    """Weight-space form of ``apply_scaling``.

    Scales the incoming weights of the next Dense or Conv2D layer instead of
    inserting a layer. MaxPool, Flatten and Scale layers in between are
    traversed; they commute with nonnegative per-channel multipliers.

    Raises:
        DomainValueError: If ``c`` leaves [0, 1], has the wrong length or the
            site is not refinable.
        PreconditionError: If a PcaScale or any other channel-mixing layer
            sits between the site and the next Dense or Conv2D layer.
    """
    _check_site(model, site)
    c = np.asarray(c, dtype=np.float64)
    if c.shape != (_channel_count(model, site),) or np.any(c < 0.0) or np.any(c > 1.0):
        raise DomainValueError(f"Invalid multipliers for site {site}")
    index = site + 1
    while isinstance(model.layers[index], (MaxPool, Flatten, Scale)):
        index += 1
    target = model.layers[index]
    refined = model.copy()
    if isinstance(target, Conv2D):
        refined.layers[index].kernels = target.kernels * c[None, :, None, None]
        return refined
    if not isinstance(target, Dense):
        raise PreconditionError(
            f"Layer {index} after site {site} is neither Dense nor Conv2D"
        )
    per_channel = target.weight.shape[1] // c.shape[0]
    refined.layers[index].weight = target.weight * np.repeat(c, per_channel)[None, :]
    return refined


def fit_pca(activations: Tensor) -> PcaBasis:
    """Eigenbasis of the sample covariance (divisor N) of ``N x n`` activations.

    Components are ordered by descending eigenvalue; each eigenvector's
    largest-magnitude entry is made positive. Tiny negative eigenvalues from
    round-off are clipped to zero.

    Raises:
        DomainValueError: With fewer than two samples.
    """
    rows = np.asarray(activations, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[0] < 2:
        raise DomainValueError("PCA needs at least two activation vectors")
    mean = rows.mean(axis=0)
    centered = rows - mean
    covariance = centered.T @ centered / rows.shape[0]
    eigenvalues, vectors = np.linalg.eigh(covariance)
    order = np.argsort(eigenvalues)[::-1]
    eigenvalues = np.clip(eigenvalues[order], 0.0, None)
    vectors = vectors[:, order]
    pivots = np.argmax(np.abs(vectors), axis=0)
    signs = np.where(vectors[pivots, np.arange(vectors.shape[1])] < 0.0, -1.0, 1.0)
    return PcaBasis(components=vectors * signs, mean=mean, eigenvalues=eigenvalues)


def pca_coefficients(basis: PcaBasis, rows: Tensor, lam: float) -> Tensor:
    """``c_k = E[h_k^2] / (E[h_k^2] + lambda)`` over the given activation rows."""
    _check_lambda(lam)
    second = np.mean(basis.project(rows) ** 2, axis=0)
    if lam == 0.0:
        return np.ones_like(second)
    return second / (second + lam)


def apply_pca_egem(
    model: Model, site: int, basis: PcaBasis, lam: float, rows: Tensor
) -> Model:
    """Insert a PcaScale after ``site`` (behind any existing refinement layers).

    Args:
        model (Model): Model to refine.
        site (int): Refinable site.
        basis (PcaBasis): Basis fitted on ``rows``.
        lam (float): Exposure penalty.
        rows (Tensor): The site's activation vectors on the available data.

    Raises:
        DimensionError: If the basis does not match the site's channel count.
    """
    _check_site(model, site)
    if basis.dimension != _channel_count(model, site):
        raise DimensionError(
            f"PCA basis of dimension {basis.dimension} does not fit site {site} "
            f"with {_channel_count(model, site)} channels"
        )
    c = pca_coefficients(basis, rows, lam)
    _, stop = model.refinement_tail(site)
    return model.with_layer_inserted(stop, PcaScale(basis, c))


def _penalty_mask(features: int) -> Tensor:
    mask = np.ones(features + 1)
    mask[-1] = 0.0
    return mask


def _augment(features: Tensor) -> Tensor:
    return np.hstack([features, np.ones((features.shape[0], 1))])


def _solve(gram: Tensor, rhs: Tensor, lam: float) -> Tensor:
    """Solve ``(gram + lambda P) w = rhs`` with P excluding the bias row."""
    system = gram + lam * np.diag(_penalty_mask(gram.shape[0] - 1))
    if lam == 0.0 and np.linalg.cond(system) > CONDITION_LIMIT:
        raise NumericalError(
            "Feature Gram matrix is singular at lambda = 0; use lambda > 0"
        )
    try:
        return np.linalg.solve(system, rhs)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"Linear solve failed ({exc}); use lambda > 0")


def rgem_weights(sigma: Tensor, w_old: Tensor, lam: float) -> Tensor:
    """``(Sigma + lambda I)^-1 Sigma w_old`` for ``p x p`` Sigma and ``p x out`` w_old."""
    _check_lambda(lam)
    system = sigma + lam * np.eye(sigma.shape[0])
    if lam == 0.0 and np.linalg.cond(system) > CONDITION_LIMIT:
        raise NumericalError("Sigma is singular at lambda = 0; use lambda > 0")
    try:
        return np.linalg.solve(system, sigma @ w_old)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"Linear solve failed ({exc}); use lambda > 0")


def last_layer_features(model: Model, data: Tensor) -> Tensor:
    """Inputs of the final dense layer, ``N x p``."""
    feature_layer = model.last_dense_index() - 1
    if feature_layer < 0:
        return data.reshape(len(data), -1)
    chunks = [
        capture_batch(model, data[i : i + STATS_CHUNK], [feature_layer])[feature_layer]
        for i in range(0, len(data), STATS_CHUNK)
    ]
    return np.concatenate(chunks).reshape(len(data), -1)


def _replace_readout(model: Model, solution: Tensor) -> Model:
    index = model.last_dense_index()
    refined = model.copy()
    refined.layers[index] = Dense(
        weight=np.ascontiguousarray(solution[:-1].T), bias=solution[-1].copy()
    )
    return refined


def rgem_refit(model: Model, data: Tensor, lam: float) -> Model:
    """Refit the read-out to reproduce the original outputs under an L2 penalty.

    Raises:
        DomainValueError: On empty data or negative lambda.
        NumericalError: If the system is singular at ``lambda = 0``.
    """
    _check_lambda(lam)
    if len(data) == 0:
        raise DomainValueError("RGEM needs at least one sample")
    readout = model.layers[model.last_dense_index()]
    x = _augment(last_layer_features(model, data))
    gram = x.T @ x / len(x)
    w_old = np.vstack([readout.weight.T, readout.bias[None, :]])
    return _replace_readout(model, _solve(gram, gram @ w_old, lam))


def ridge_refit(
    model: Model, data: Tensor, labels: npt.NDArray[np.int64], lam: float
) -> Model:
    """Fit the read-out to one-hot labels by ridge regression."""
    _check_lambda(lam)
    if len(data) == 0:
        raise DomainValueError("Ridge needs at least one sample")
    x = _augment(last_layer_features(model, data))
    targets = np.eye(model.class_count)[np.asarray(labels, dtype=np.int64)]
    gram = x.T @ x / len(x)
    return _replace_readout(model, _solve(gram, x.T @ targets / len(x), lam))


def retrain(
    model: Model,
    data: Tensor,
    labels: npt.NDArray[np.int64],
    epochs: int,
    lr: float,
    rng: SeededRng,
    batch: int = 32,
    clip: Optional[float] = None,
) -> Model:
    """Fine-tune every layer of a copy of ``model`` on the available data."""
    refined = copy.deepcopy(model)
    if epochs > 0:
        train(refined, data, labels, epochs, lr, batch, rng, clip=clip)
    return refined
