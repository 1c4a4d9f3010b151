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

Module: src/cleverprune/domain/value_objects/tensor.py

Tensor and Seeded Random Stream Value Objects

Defines the universal value carrier of the library (a float64, row-major
numpy array) and the seeded pseudo-random stream every stochastic step draws
from. The generator is numpy's PCG64, a splittable 64-bit permuted
congruential generator whose output stream is identical on every platform for
a given seed.

Key Features:
    - ``as_tensor`` validation of shape and dtype invariants
    - ``freeze`` for values that must not change after construction
    - ``SeededRng.child`` for independent, reproducible sub-streams

Version: 0.1.0
License: Apache 2.0
"""

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
import numpy.typing as npt

from cleverprune.domain.errors import DimensionError, DomainValueError

__version__ = "0.1.0"

Tensor = npt.NDArray[np.float64]

_U64_MAX = 2**64 - 1


def as_tensor(values: Union[npt.ArrayLike, Tensor]) -> Tensor:
    """Convert array-like input to a validated float64 row-major tensor.

    Args:
        values (ArrayLike): Nested sequences, scalars or arrays.

    Returns:
        Tensor: C-contiguous float64 array. A copy is made only when the input
            is not already in that layout.

    Raises:
        DimensionError: If any extent is zero (the product of the shape must
            equal the number of stored values, all extents positive).

    Example:
        >>> t = as_tensor([[1, 2], [3, 4]])
        >>> t.dtype, t.shape
        (dtype('float64'), (2, 2))
    """
    tensor = np.ascontiguousarray(values, dtype=np.float64)
    if any(extent <= 0 for extent in tensor.shape):
        raise DimensionError(f"Tensor extents must be positive, got {tensor.shape}")
    return tensor


def freeze(tensor: Tensor) -> Tensor:
    """Mark a tensor read-only and return it."""
    tensor.setflags(write=False)
    return tensor


@dataclass
class SeededRng:
    """Seeded pseudo-random stream backed by numpy's PCG64 generator.

    Two instances built from the same seed produce byte-identical streams.
    Sub-streams derived through ``child`` are independent of each other and
    of the parent, so adding a draw in one pipeline stage never shifts the
    numbers another stage sees.

    Attributes:
        seed (int): 64-bit unsigned seed.
        keys (tuple[int, ...]): Spawn path identifying this sub-stream.

    Raises:
        DomainValueError: If the seed is negative or wider than 64 bits.
    """

    seed: int
    keys: tuple = ()
    generator: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 0 <= int(self.seed) <= _U64_MAX:
            raise DomainValueError(f"Seed must be a 64-bit unsigned value, got {self.seed}")
        sequence = np.random.SeedSequence(int(self.seed), spawn_key=tuple(self.keys))
        self.generator = np.random.Generator(np.random.PCG64(sequence))

    def child(self, *keys: Union[int, str]) -> "SeededRng":
        """Derive an independent sub-stream identified by ``keys``.

        String keys are folded into integers with a fixed byte-level hash so
        the mapping does not depend on Python's randomised ``hash``.

        Example:
            >>> rng = SeededRng(7)
            >>> init_rng = rng.child("init")
            >>> data_rng = rng.child("data", 3)
        """
        return SeededRng(self.seed, tuple(self.keys) + tuple(_fold_key(k) for k in keys))

    def normal(self, loc: float = 0.0, scale: float = 1.0, size=None) -> Tensor:
        return self.generator.normal(loc, scale, size)

    def uniform(self, low: float = 0.0, high: float = 1.0, size=None) -> Tensor:
        return self.generator.uniform(low, high, size)

    def integers(self, low: int, high: int, size=None):
        return self.generator.integers(low, high, size)

    def permutation(self, n: int) -> npt.NDArray[np.int64]:
        return self.generator.permutation(n)

    def choice(self, population: Sequence, size: int, replace: bool):
        return self.generator.choice(population, size=size, replace=replace)

    def stream_bytes(self, length: int) -> bytes:
        """Return ``length`` raw bytes from the stream (used for reproducibility checks)."""
        return self.generator.bytes(length)


def _fold_key(key: Union[int, str]) -> int:
    if isinstance(key, int):
        return key
    value = 0
    for byte in key.encode("utf-8"):
        value = (value * 131 + byte) % _U64_MAX
    return value
