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

Module: src/cleverprune/domain/entities/dataset.py

Dataset Entity

Labelled image collection with per-sample artifact flags and group tags.
Arrays are frozen on construction; every transformation (poisoning,
subsetting) returns a new Dataset.

Group tags are a bitmask of generation attributes, used for per-group
recall on the positive class.

Version: 0.1.0
License: Apache 2.0
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence

import numpy as np
import numpy.typing as npt

from cleverprune.domain.errors import DimensionError, DomainValueError
from cleverprune.domain.value_objects.tensor import Tensor, freeze

__version__ = "0.1.0"

GROUP_TAGS: Dict[str, int] = {"thick": 1, "slanted": 2, "small": 4}


@dataclass
class Dataset:
    """Immutable labelled image set.

    Attributes:
        images (Tensor): ``N x C x H x W`` pixel values in [0, 1].
        labels (ndarray): ``N`` integer class labels.
        artifact_flags (ndarray): ``N`` booleans, true where an artifact was
            injected.
        class_count (int): Number of classes.
        seed (int): Seed the data was generated from.
        group_tags (ndarray): ``N`` bitmasks over ``GROUP_TAGS``.
        artifact (Optional[Dict[str, Any]]): Serialised spec of the injected
            artifact, if any.

    Raises:
        DimensionError: If per-sample arrays disagree in length.
        DomainValueError: If labels or pixel values are out of range.
    """

    images: Tensor
    labels: npt.NDArray[np.int64]
    artifact_flags: npt.NDArray[np.bool_]
    class_count: int
    seed: int = 0
    group_tags: Optional[npt.NDArray[np.int64]] = None
    artifact: Optional[Dict[str, Any]] = field(default=None)

    def __post_init__(self):
        self.images = np.array(self.images, dtype=np.float64, order="C")
        self.labels = np.array(self.labels, dtype=np.int64)
        self.artifact_flags = np.array(self.artifact_flags, dtype=bool)
        if self.group_tags is None:
            self.group_tags = np.zeros(len(self.labels), dtype=np.int64)
        self.group_tags = np.array(self.group_tags, dtype=np.int64)

        n = self.images.shape[0]
        if self.images.ndim != 4:
            raise DimensionError(f"Images must be N x C x H x W, got {self.images.shape}")
        for name in ("labels", "artifact_flags", "group_tags"):
            if getattr(self, name).shape != (n,):
                raise DimensionError(f"{name} must have length {n}")
        if n and (self.labels.min() < 0 or self.labels.max() >= self.class_count):
            raise DomainValueError(f"Labels must lie in [0, {self.class_count})")
        if n and (self.images.min() < 0.0 or self.images.max() > 1.0):
            raise DomainValueError("Pixel values must lie in [0, 1]")

        for array in (self.images, self.labels, self.artifact_flags, self.group_tags):
            freeze(array)

    def __len__(self) -> int:
        return int(self.images.shape[0])

    @property
    def image_shape(self):
        return tuple(self.images.shape[1:])

    def subset(self, indices: Sequence[int]) -> "Dataset":
        """Samples at ``indices`` in the given order (repeats allowed)."""
        idx = np.asarray(indices, dtype=np.int64)
        return Dataset(
            images=self.images[idx],
            labels=self.labels[idx],
            artifact_flags=self.artifact_flags[idx],
            class_count=self.class_count,
            seed=self.seed,
            group_tags=self.group_tags[idx],
            artifact=self.artifact,
        )

    def class_indices(self, label: int) -> npt.NDArray[np.int64]:
        return np.flatnonzero(self.labels == label)

    def in_group(self, tag: str) -> npt.NDArray[np.bool_]:
        if tag not in GROUP_TAGS:
            raise DomainValueError(f"Unknown group tag '{tag}'")
        return (self.group_tags & GROUP_TAGS[tag]) != 0

    def replace_images(
        self,
        images: Tensor,
        flags: npt.NDArray[np.bool_],
        artifact: Optional[Dict[str, Any]],
    ) -> "Dataset":
        return Dataset(
            images=images,
            labels=self.labels,
            artifact_flags=flags,
            class_count=self.class_count,
            seed=self.seed,
            group_tags=self.group_tags,
            artifact=artifact,
        )


def concatenate(parts: Sequence[Dataset]) -> Dataset:
    """Stack datasets sharing class count and image shape."""
    if not parts:
        raise DomainValueError("Nothing to concatenate")
    first = parts[0]
    return Dataset(
        images=np.concatenate([p.images for p in parts]),
        labels=np.concatenate([p.labels for p in parts]),
        artifact_flags=np.concatenate([p.artifact_flags for p in parts]),
        class_count=first.class_count,
        seed=first.seed,
        group_tags=np.concatenate([p.group_tags for p in parts]),
        artifact=first.artifact,
    )
