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

Module: src/cleverprune/infrastructure/chbench/glyphs.py

Procedural Digit Glyphs

Desk-scale stand-in for handwritten digits: seven-segment strokes rendered
anti-aliased into a square single-channel image, with seeded jitter of
position, stroke thickness, slant and glyph size plus Gaussian pixel noise.

The glyph always keeps a two-pixel margin to the top-left corner, so the
corner artifact never overlaps a stroke.

Key Features:
    - Bit-identical output for the same seed
    - Class-balanced sets with per-sample group tags (thick, slanted, small)
    - Pixel values clamped to [0, 1]

Version: 0.1.0
License: Apache 2.0
"""

import logging
from typing import Dict, Tuple

import numpy as np

from cleverprune.domain.entities.dataset import GROUP_TAGS, Dataset
from cleverprune.domain.errors import DomainValueError
from cleverprune.domain.value_objects.tensor import SeededRng, Tensor

__version__ = "0.1.0"

logger = logging.getLogger(__name__)

MIN_SIZE = 12
MAX_CLASSES = 10
NOISE_SIGMA = 0.05
SLANT = 0.15

Point = Tuple[float, float]

# Segment endpoints as (row, col) fractions of the glyph box.
SEGMENTS: Dict[str, Tuple[Point, Point]] = {
    "a": ((0.0, 0.0), (0.0, 1.0)),
    "b": ((0.0, 1.0), (0.5, 1.0)),
    "c": ((0.5, 1.0), (1.0, 1.0)),
    "d": ((1.0, 0.0), (1.0, 1.0)),
    "e": ((0.5, 0.0), (1.0, 0.0)),
    "f": ((0.0, 0.0), (0.5, 0.0)),
    "g": ((0.5, 0.0), (0.5, 1.0)),
}

DIGIT_SEGMENTS: Dict[int, str] = {
    0: "abcdef",
    1: "bc",
    2: "abdeg",
    3: "abcdg",
    4: "bcfg",
    5: "acdfg",
    6: "acdefg",
    7: "abc",
    8: "abcdefg",
    9: "abcdfg",
}


def _segment_distance(rows: Tensor, cols: Tensor, start: Point, end: Point) -> Tensor:
    """Euclidean distance of every pixel centre to the segment ``start``-``end``."""
    (r0, c0), (r1, c1) = start, end
    dr, dc = r1 - r0, c1 - c0
    length2 = dr * dr + dc * dc
    t = np.clip(((rows - r0) * dr + (cols - c0) * dc) / length2, 0.0, 1.0)
    return np.hypot(rows - (r0 + t * dr), cols - (c0 + t * dc))


def render_glyph(
    digit: int,
    size: int = 16,
    top: float = 3.0,
    left: float = 5.0,
    height: float = 10.0,
    width: float = 6.0,
    thickness: float = 1.0,
    slant: float = 0.0,
) -> Tensor:
    """Noise-free ``size x size`` rendering of one digit.

    Args:
        digit (int): Class in [0, 10).
        size (int): Image side length.
        top, left (float): Upper-left corner of the glyph box.
        height, width (float): Glyph box extents.
        thickness (float): Stroke width in pixels.
        slant (float): Horizontal shear; positive leans the top to the right.

    Returns:
        Tensor: Pixel intensities in [0, 1].
    """
    if digit not in DIGIT_SEGMENTS:
        raise DomainValueError(f"No glyph for class {digit}")
    rows, cols = np.mgrid[0:size, 0:size].astype(np.float64)

    def place(point: Point) -> Point:
        r, c = point
        return top + r * height, left + c * width + slant * (0.5 - r) * height

    distance = np.full((size, size), np.inf)
    for name in DIGIT_SEGMENTS[digit]:
        start, end = SEGMENTS[name]
        distance = np.minimum(distance, _segment_distance(rows, cols, place(start), place(end)))
    return np.clip(thickness / 2.0 + 0.5 - distance, 0.0, 1.0)


def _draw_sample(digit: int, size: int, rng: SeededRng) -> Tuple[Tensor, int]:
    small = bool(rng.uniform() < 0.25)
    thick = bool(rng.uniform() < 0.3)
    slant = float(rng.choice([-SLANT, 0.0, SLANT], 1, replace=True)[0])
    height, width = (7.0, 4.0) if small else (10.0, 6.0)
    dy, dx = rng.integers(-1, 2, size=2)
    top = (size - height) / 2.0 + dy
    left = (size - width) / 2.0 + dx
    image = render_glyph(
        digit,
        size=size,
        top=top,
        left=left,
        height=height,
        width=width,
        thickness=2.0 if thick else 1.0,
        slant=slant,
    )
    image = np.clip(image + rng.normal(0.0, NOISE_SIGMA, image.shape), 0.0, 1.0)
    tags = (
        GROUP_TAGS["thick"] * thick
        + GROUP_TAGS["slanted"] * (slant != 0.0)
        + GROUP_TAGS["small"] * small
    )
    return image, int(tags)


def generate_dataset(
    seed: int,
    n_per_class: int,
    classes: int = 10,
    size: int = 16,
    split: str = "train",
) -> Dataset:
    """Class-balanced glyph dataset, shuffled with a seeded permutation.

    Args:
        seed (int): Generation seed; equal seeds give bit-identical data.
        n_per_class (int): Samples per class.
        classes (int): Number of classes, at most 10.
        size (int): Image side length, at least 12.
        split (str): Stream name; different splits of one seed are
            independent draws.

    Returns:
        Dataset: ``classes * n_per_class`` samples of shape ``1 x size x size``
            with no artifact flags set.

    Raises:
        DomainValueError: If ``n_per_class < 1`` or classes/size are out of range.

    Example:
        >>> data = generate_dataset(seed=0, n_per_class=50)
        >>> len(data), data.image_shape
        (500, (1, 16, 16))
    """
    if n_per_class < 1:
        raise DomainValueError(f"n_per_class must be >= 1, got {n_per_class}")
    if not 1 <= classes <= MAX_CLASSES:
        raise DomainValueError(f"classes must lie in [1, {MAX_CLASSES}], got {classes}")
    if size < MIN_SIZE:
        raise DomainValueError(f"Image size must be >= {MIN_SIZE}, got {size}")

    rng = SeededRng(seed).child("glyphs", split)
    total = classes * n_per_class
    images = np.empty((total, 1, size, size))
    labels = np.repeat(np.arange(classes), n_per_class)
    tags = np.empty(total, dtype=np.int64)
    for index, digit in enumerate(labels):
        images[index, 0], tags[index] = _draw_sample(int(digit), size, rng)

    order = rng.permutation(total)
    logger.debug(f"Generated {total} glyphs ({classes} classes, seed {seed}, {split})")
    return Dataset(
        images=images[order],
        labels=labels[order],
        artifact_flags=np.zeros(total, dtype=bool),
        class_count=classes,
        seed=seed,
        group_tags=tags[order],
    )
