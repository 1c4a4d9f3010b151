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

Module: src/cleverprune/infrastructure/chbench/artifacts.py

Artifact Injection

Pixel edits for every artifact kind, dispatched on the spec type. Images
are ``C x H x W``; every edit returns a new image clamped to [0, 1] and
leaves the input untouched. Corner pixels, lower erase, frame and patch
are idempotent.

``artifact_mask`` marks the pixels an artifact is allowed to change.

Version: 0.1.0
License: Apache 2.0
"""

import math
from functools import singledispatch

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from cleverprune.domain.errors import DimensionError, DomainValueError
from cleverprune.domain.value_objects.artifact_spec import (
    ArtifactSpec,
    Blur,
    CornerPixels,
    Frame,
    IntensityShift,
    LowerErase,
    Patch,
)
from cleverprune.domain.value_objects.tensor import Tensor

__version__ = "0.1.0"


def inject_artifact(image: Tensor, spec: ArtifactSpec) -> Tensor:
    """Apply ``spec`` to one ``C x H x W`` image.

    Raises:
        DomainValueError: If the artifact does not fit the image.

    Example:
        >>> out = inject_artifact(np.zeros((1, 16, 16)), CornerPixels())
        >>> int(out.sum())
        3
    """
    if image.ndim != 3:
        raise DimensionError(f"Expected a C x H x W image, got shape {image.shape}")
    return np.clip(_inject(spec, np.array(image, dtype=np.float64)), 0.0, 1.0)


def inject_batch(images: Tensor, spec: ArtifactSpec) -> Tensor:
    return np.stack([inject_artifact(image, spec) for image in images])


@singledispatch
def _inject(spec, image: Tensor) -> Tensor:
    raise DomainValueError(f"Unsupported artifact {type(spec).__name__}")


@_inject.register
def _(spec: CornerPixels, image: Tensor) -> Tensor:
    _, h, w = image.shape
    for r, c in spec.coords:
        if r >= h or c >= w:
            raise DomainValueError(f"Corner pixel ({r}, {c}) outside a {h}x{w} image")
        image[:, r, c] = spec.value
    return image


@_inject.register
def _(spec: Blur, image: Tensor) -> Tensor:
    _, h, w = image.shape
    if spec.k > min(h, w):
        raise DomainValueError(f"Blur kernel {spec.k} exceeds image {h}x{w}")
    half = spec.k // 2
    padded = np.pad(image, ((0, 0), (half, half), (half, half)))
    windows = sliding_window_view(padded, (spec.k, spec.k), axis=(1, 2))
    return windows.mean(axis=(-2, -1))


@_inject.register
def _(spec: LowerErase, image: Tensor) -> Tensor:
    h = image.shape[1]
    image[:, h - math.ceil(h * spec.fraction) :, :] = 0.0
    return image


@_inject.register
def _(spec: IntensityShift, image: Tensor) -> Tensor:
    return image + spec.delta


@_inject.register
def _(spec: Frame, image: Tensor) -> Tensor:
    _, h, w = image.shape
    if 2 * spec.width > min(h, w):
        raise DomainValueError(f"Frame width {spec.width} too wide for {h}x{w}")
    image[:, : spec.width, :] = spec.value
    image[:, h - spec.width :, :] = spec.value
    image[:, :, : spec.width] = spec.value
    image[:, :, w - spec.width :] = spec.value
    return image


@_inject.register
def _(spec: Patch, image: Tensor) -> Tensor:
    _, h, w = image.shape
    if spec.row + spec.size > h or spec.col + spec.size > w:
        raise DomainValueError(
            f"Patch at ({spec.row}, {spec.col}) of size {spec.size} leaves a {h}x{w} image"
        )
    i, j = np.indices((spec.size, spec.size))
    pattern = np.where((i + j) % 2 == 0, spec.high, spec.low)
    image[:, spec.row : spec.row + spec.size, spec.col : spec.col + spec.size] = pattern
    return image


def artifact_mask(spec: ArtifactSpec, image_shape) -> np.ndarray:
    """Boolean ``C x H x W`` mask of the pixels ``spec`` may modify."""
    c, h, w = image_shape
    mask = np.zeros((c, h, w), dtype=bool)
    if isinstance(spec, CornerPixels):
        for r, col in spec.coords:
            mask[:, r, col] = True
    elif isinstance(spec, LowerErase):
        mask[:, h - math.ceil(h * spec.fraction) :, :] = True
    elif isinstance(spec, Frame):
        mask[:, : spec.width, :] = mask[:, h - spec.width :, :] = True
        mask[:, :, : spec.width] = mask[:, :, w - spec.width :] = True
    elif isinstance(spec, Patch):
        mask[:, spec.row : spec.row + spec.size, spec.col : spec.col + spec.size] = True
    else:
        mask[:] = True
    return mask
