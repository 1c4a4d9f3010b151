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

Module: src/cleverprune/infrastructure/chbench/poisoning.py

Poisoning and Refinement-set Selection

Training poisoning plants the artifact on a fraction of one class so the
model learns the shortcut; uniform test poisoning plants it on every class
alike so the artifact carries no label information. Poisoned counts are
exact (``round(p * n)`` with half rounded up), with a seeded choice of
which samples.

The refinement set simulates data a user has checked: artifact-free and
correctly predicted, oversampled with replacement for classes that fall
short.

Version: 0.1.0
License: Apache 2.0
"""

import logging
import math
from typing import List, Optional

import numpy as np

from cleverprune.domain.entities.dataset import Dataset
from cleverprune.domain.entities.model import Model
from cleverprune.domain.errors import DomainValueError, PreconditionError
from cleverprune.domain.value_objects.artifact_spec import ArtifactSpec, artifact_to_dict
from cleverprune.domain.value_objects.tensor import SeededRng
from cleverprune.infrastructure.chbench.artifacts import inject_batch
from cleverprune.infrastructure.network import predict

__version__ = "0.1.0"

logger = logging.getLogger(__name__)


def poisoned_count(p: float, n: int) -> int:
    return int(math.floor(p * n + 0.5))


def poison(
    dataset: Dataset,
    target_class: Optional[int],
    p: float,
    spec: ArtifactSpec,
    rng: SeededRng,
) -> Dataset:
    """Add the artifact to a fraction ``p`` of the samples of ``target_class``.

    Args:
        dataset (Dataset): Source data; not modified.
        target_class (Optional[int]): Class to poison; ``None`` poisons every
            class uniformly.
        p (float): Fraction in [0, 1].
        spec (ArtifactSpec): The artifact.
        rng (SeededRng): Chooses which samples get the artifact.

    Returns:
        Dataset: The same dataset when nothing is poisoned, otherwise a new
            one with the chosen images edited and flagged.

    Raises:
        DomainValueError: If ``p`` leaves [0, 1] or the class does not exist.
    """
    if not 0.0 <= p <= 1.0:
        raise DomainValueError(f"Poisoning rate must lie in [0, 1], got {p}")
    if target_class is None:
        candidates = np.arange(len(dataset))
    elif 0 <= target_class < dataset.class_count:
        candidates = dataset.class_indices(target_class)
    else:
        raise DomainValueError(
            f"Target class {target_class} outside [0, {dataset.class_count})"
        )

    count = poisoned_count(p, len(candidates))
    if count == 0:
        return dataset
    chosen = np.sort(rng.choice(candidates, count, replace=False))

    images = np.array(dataset.images)
    images[chosen] = inject_batch(dataset.images[chosen], spec)
    flags = np.array(dataset.artifact_flags)
    flags[chosen] = True
    logger.debug(
        f"Poisoned {count}/{len(candidates)} samples "
        f"({'all classes' if target_class is None else f'class {target_class}'})"
    )
    return dataset.replace_images(images, flags, artifact_to_dict(spec))


def select_refinement_set(
    model: Model, dataset: Dataset, n_per_class: int, rng: SeededRng
) -> Dataset:
    """Correctly predicted samples, ``n_per_class`` of each class.

    Classes with fewer correct predictions keep all of them and are topped
    up by sampling those with replacement.

    Raises:
        PreconditionError: If any sample carries an artifact, or a class has
            no correctly predicted sample.
        DomainValueError: If ``n_per_class < 1``.
    """
    if n_per_class < 1:
        raise DomainValueError(f"n_per_class must be >= 1, got {n_per_class}")
    if np.any(dataset.artifact_flags):
        raise PreconditionError("The refinement set must be free of artifacts")

    predictions = predict(model, dataset.images)
    picked: List[np.ndarray] = []
    for label in range(dataset.class_count):
        correct = np.flatnonzero((dataset.labels == label) & (predictions == label))
        if correct.size == 0:
            raise PreconditionError(f"Class {label} has no correctly predicted sample")
        if correct.size >= n_per_class:
            picked.append(np.sort(rng.choice(correct, n_per_class, replace=False)))
            continue
        logger.warning(
            f"Class {label}: only {correct.size} correct samples, "
            f"oversampling to {n_per_class}"
        )
        extra = rng.choice(correct, n_per_class - correct.size, replace=True)
        picked.append(np.concatenate([correct, np.sort(extra)]))
    return dataset.subset(np.concatenate(picked))
