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

Module: src/cleverprune/infrastructure/chbench/metrics.py

Clever-Hans Evaluation Metrics

Accuracy on the clean and fully poisoned test sets, per-group recall on a
positive class, and three diagnostics:

    sparsity        mean over images of ||delta a||_2 / ||delta a||_1, the
                    footprint of the artifact in a layer (1 when a single
                    unit changes, 1/sqrt(n) when all n change equally)
    separability    R^2 = 1 - d_within / d_total over cosine distances
                    between clean and poisoned activation vectors
    logit shift     per-sample max-abs logit change caused by refinement,
                    summarized separately on clean and poisoned inputs

Version: 0.1.0
License: Apache 2.0
"""

import logging
from typing import Dict, List, Optional, Sequence

import numpy as np

from cleverprune.domain.entities.dataset import GROUP_TAGS, Dataset
from cleverprune.domain.entities.metrics_report import MetricsReport
from cleverprune.domain.entities.model import Model
from cleverprune.domain.errors import DimensionError, DomainValueError
from cleverprune.domain.value_objects.artifact_spec import ArtifactSpec
from cleverprune.domain.value_objects.tensor import Tensor
from cleverprune.infrastructure.chbench.artifacts import inject_batch
from cleverprune.infrastructure.network import capture_batch, logits_batched, predict
from cleverprune.infrastructure.tensor_ops import l1_norm, l2_norm

__version__ = "0.1.0"

logger = logging.getLogger(__name__)

SHIFT_QUANTILES = (0.05, 0.25, 0.5, 0.75, 0.95)


def evaluate(
    model: Model,
    clean_test: Dataset,
    poisoned_test: Dataset,
    positive_class: Optional[int] = None,
    run_seed: int = 0,
) -> MetricsReport:
    """Accuracy on both test sets and per-group recall on ``positive_class``.

    Groups without positive samples are left out of ``recall_by_group``.

    Raises:
        DomainValueError: If either test set is empty.
    """
    if len(clean_test) == 0 or len(poisoned_test) == 0:
        raise DomainValueError("Evaluation needs nonempty clean and poisoned test sets")
    clean_pred = predict(model, clean_test.images)
    poisoned_pred = predict(model, poisoned_test.images)

    recall: Dict[str, float] = {}
    if positive_class is not None:
        positives = clean_test.labels == positive_class
        for tag in GROUP_TAGS:
            members = positives & clean_test.in_group(tag)
            if members.any():
                recall[tag] = float(np.mean(clean_pred[members] == positive_class))

    return MetricsReport(
        accuracy_clean=float(np.mean(clean_pred == clean_test.labels)),
        accuracy_poisoned=float(np.mean(poisoned_pred == poisoned_test.labels)),
        recall_by_group=recall,
        run_seed=run_seed,
    )


def sparsity_ratio(delta: Tensor) -> Optional[float]:
    """``||delta||_2 / ||delta||_1``, or ``None`` for an all-zero difference.

    Example:
        >>> sparsity_ratio(np.array([0.0, 3.0, 0.0]))
        1.0
    """
    flat = np.ravel(delta)
    if flat.size == 0:
        return None
    l1 = l1_norm(flat)
    if l1 == 0.0:
        return None
    return l2_norm(flat) / l1


def sparsity(
    model: Model, images: Tensor, spec: ArtifactSpec, sites: Sequence[int]
) -> Dict[int, Optional[float]]:
    """Mean artifact footprint sparsity per site.

    Images whose activations do not change at a site are skipped there; a
    site where every image was skipped reports ``None``.
    """
    if len(images) == 0:
        raise DomainValueError("Sparsity needs at least one image")
    sites = list(sites)
    clean = capture_batch(model, images, sites)
    poisoned = capture_batch(model, inject_batch(images, spec), sites)
    result: Dict[int, Optional[float]] = {}
    for site in sites:
        ratios = [
            r
            for r in (sparsity_ratio(p - c) for c, p in zip(clean[site], poisoned[site]))
            if r is not None
        ]
        result[site] = float(np.mean(ratios)) if ratios else None
    return result


def cosine_distances(x: Tensor, y: Tensor) -> Tensor:
    """Pairwise ``1 - x.y / (|x||y|)``; pairs involving a zero vector get 1."""
    x = x.reshape(len(x), -1)
    y = y.reshape(len(y), -1)
    nx = np.linalg.norm(x, axis=1)
    ny = np.linalg.norm(y, axis=1)
    denominator = np.outer(nx, ny)
    similarity = np.divide(
        x @ y.T, denominator, out=np.zeros_like(denominator), where=denominator > 0.0
    )
    return 1.0 - similarity


def separability_from_vectors(clean: Tensor, poisoned: Tensor) -> float:
    """R^2 of two equal-size groups of activation vectors.

    ``d_within`` averages cosine distances inside each group over ``2 N^2``
    pairs, ``d_total`` over all ``4 N^2`` ordered pairs. Returns 0 when
    ``d_total`` vanishes.
    """
    if len(clean) != len(poisoned) or len(clean) == 0:
        raise DimensionError("Separability needs two nonempty groups of equal size")
    n = len(clean)
    both = np.concatenate([clean.reshape(n, -1), poisoned.reshape(n, -1)])
    distances = cosine_distances(both, both)
    clean_block = distances[:n, :n].sum()
    poisoned_block = distances[n:, n:].sum()
    cross = distances[:n, n:].sum() + distances[n:, :n].sum()
    within = (clean_block + poisoned_block) / (2 * n * n)
    total = (clean_block + poisoned_block + cross) / (4 * n * n)
    if total == 0.0:
        return 0.0
    return float(1.0 - within / total)


def separability_r2(
    model: Model, clean: Tensor, poisoned: Tensor, sites: Sequence[int]
) -> Dict[int, float]:
    """Clean/poisoned separability at the output of each site."""
    sites = list(sites)
    a = capture_batch(model, clean, sites)
    b = capture_batch(model, poisoned, sites)
    return {site: separability_from_vectors(a[site], b[site]) for site in sites}


def _summary(prefix: str, shifts: Tensor) -> Dict[str, float]:
    summary = {f"{prefix}_mean": float(np.mean(shifts)), f"{prefix}_max": float(np.max(shifts))}
    for q, value in zip(SHIFT_QUANTILES, np.quantile(shifts, SHIFT_QUANTILES)):
        summary[f"{prefix}_q{int(round(q * 100)):02d}"] = float(value)
    return summary


def max_abs_shift(before: Model, after: Model, images: Tensor) -> Tensor:
    """Per-sample ``max_j |y_j(after) - y_j(before)|``."""
    if before.class_count != after.class_count:
        raise DimensionError(
            f"Models disagree on output size: {before.class_count} vs {after.class_count}"
        )
    return np.max(np.abs(logits_batched(after, images) - logits_batched(before, images)), axis=1)


def logit_shift(
    before: Model, after: Model, clean_test: Dataset, poisoned_test: Dataset
) -> Dict[str, float]:
    """Summaries (mean, quantiles, max) of per-sample logit changes on both test sets."""
    summary: Dict[str, float] = {}
    parts: List = [("clean", clean_test), ("poisoned", poisoned_test)]
    for prefix, data in parts:
        summary.update(_summary(prefix, max_abs_shift(before, after, data.images)))
    return summary
