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

Module: src/cleverprune/infrastructure/model_store.py

Binary Model and Tensor Containers

Bit-exact little-endian serialization of models and plain tensors.

Model container layout::

    "EGEM"  u32 version=1  u32 layer_count
    per layer: u8 tag, u32 header extents, f64 payloads (row-major)
        Dense     out, in                 W, b
        Conv2D    F, C, kh, kw, stride, pad  kernels, bias
        ReLU      -
        MaxPool   k, stride
        Flatten   -
        Scale     n                       c
        PcaScale  n, K                    U, mean, eigenvalues, c
    trailer: u32 class_count, u32 input rank, u32 extents...,
             u32 site_count, u32 sites...

Tensor record layout: ``"EGTS" u32 version=1 u32 rank u32 extents... f64 data``.

Every decoding failure raises FormatError with the byte offset at which
the input stopped making sense.

Version: 0.1.0
License: Apache 2.0
"""

import logging
import struct
from pathlib import Path
from typing import List, Union

import numpy as np

from cleverprune.domain.entities.activation_stats import PcaBasis
from cleverprune.domain.entities.layers import (
    Conv2D,
    Dense,
    Flatten,
    LayerSpec,
    MaxPool,
    PcaScale,
    ReLU,
    Scale,
)
from cleverprune.domain.entities.model import Model
from cleverprune.domain.errors import CleverPruneError, FormatError
from cleverprune.domain.value_objects.tensor import Tensor

__version__ = "0.1.0"

logger = logging.getLogger(__name__)

MODEL_MAGIC = b"EGEM"
TENSOR_MAGIC = b"EGTS"
FORMAT_VERSION = 1

PathLike = Union[str, Path]


class _Writer:
    def __init__(self):
        self._parts: List[bytes] = []

    def raw(self, data: bytes) -> None:
        self._parts.append(data)

    def u8(self, value: int) -> None:
        self._parts.append(struct.pack("<B", value))

    def u32(self, *values: int) -> None:
        self._parts.append(struct.pack(f"<{len(values)}I", *values))

    def f64(self, array: Tensor) -> None:
        self._parts.append(np.ascontiguousarray(array, dtype="<f8").tobytes())

    def getvalue(self) -> bytes:
        return b"".join(self._parts)


class _Reader:
    def __init__(self, data: bytes):
        self._data = data
        self.offset = 0

    def _take(self, size: int, what: str) -> bytes:
        if self.offset + size > len(self._data):
            raise FormatError(
                f"Truncated container: expected {size} bytes of {what}, "
                f"{len(self._data) - self.offset} left",
                offset=self.offset,
            )
        chunk = self._data[self.offset : self.offset + size]
        self.offset += size
        return chunk

    def magic(self, expected: bytes) -> None:
        start = self.offset
        found = self._take(len(expected), "magic")
        if found != expected:
            raise FormatError(f"Bad magic {found!r}, expected {expected!r}", offset=start)

    def version(self) -> None:
        start = self.offset
        found = self.u32()
        if found != FORMAT_VERSION:
            raise FormatError(
                f"Unsupported container version {found}, expected {FORMAT_VERSION}",
                offset=start,
            )

    def u8(self) -> int:
        return struct.unpack("<B", self._take(1, "u8"))[0]

    def u32(self) -> int:
        return struct.unpack("<I", self._take(4, "u32"))[0]

    def u32s(self, count: int) -> List[int]:
        return list(struct.unpack(f"<{count}I", self._take(4 * count, "u32 header")))

    def f64(self, *shape: int) -> Tensor:
        count = int(np.prod(shape)) if shape else 1
        chunk = self._take(8 * count, "f64 payload")
        return np.frombuffer(chunk, dtype="<f8").astype(np.float64).reshape(shape)

    def expect_end(self) -> None:
        if self.offset != len(self._data):
            raise FormatError(
                f"{len(self._data) - self.offset} trailing bytes after container",
                offset=self.offset,
            )


def _encode_layer(out: _Writer, layer: LayerSpec) -> None:
    out.u8(layer.tag)
    if isinstance(layer, Dense):
        out.u32(*layer.weight.shape)
        out.f64(layer.weight)
        out.f64(layer.bias)
    elif isinstance(layer, Conv2D):
        out.u32(*layer.kernels.shape, layer.stride, layer.pad)
        out.f64(layer.kernels)
        out.f64(layer.bias)
    elif isinstance(layer, MaxPool):
        out.u32(layer.k, layer.stride)
    elif isinstance(layer, Scale):
        out.u32(layer.c.shape[0])
        out.f64(layer.c)
    elif isinstance(layer, PcaScale):
        basis = layer.basis
        out.u32(basis.dimension, basis.rank)
        out.f64(basis.components)
        out.f64(basis.mean)
        out.f64(basis.eigenvalues)
        out.f64(layer.c)


def _decode_layer(reader: _Reader) -> LayerSpec:
    start = reader.offset
    tag = reader.u8()
    if tag == Dense.tag:
        out_features, in_features = reader.u32s(2)
        return Dense(reader.f64(out_features, in_features), reader.f64(out_features))
    if tag == Conv2D.tag:
        f, c, kh, kw, stride, pad = reader.u32s(6)
        kernels = reader.f64(f, c, kh, kw)
        return Conv2D(kernels, reader.f64(f), stride=stride, pad=pad)
    if tag == ReLU.tag:
        return ReLU()
    if tag == MaxPool.tag:
        k, stride = reader.u32s(2)
        return MaxPool(k=k, stride=stride)
    if tag == Flatten.tag:
        return Flatten()
    if tag == Scale.tag:
        (n,) = reader.u32s(1)
        return Scale(reader.f64(n))
    if tag == PcaScale.tag:
        n, k = reader.u32s(2)
        components = reader.f64(n, k)
        mean = reader.f64(n)
        eigenvalues = reader.f64(k)
        return PcaScale(PcaBasis(components, mean, eigenvalues), reader.f64(k))
    raise FormatError(f"Unknown layer tag {tag}", offset=start)


def encode_model(model: Model) -> bytes:
    """Serialize ``model`` into the binary container."""
    out = _Writer()
    out.raw(MODEL_MAGIC)
    out.u32(FORMAT_VERSION, len(model.layers))
    for layer in model.layers:
        _encode_layer(out, layer)
    out.u32(model.class_count, len(model.input_shape), *model.input_shape)
    out.u32(len(model.refinable_sites), *model.refinable_sites)
    return out.getvalue()


def decode_model(data: bytes) -> Model:
    """Inverse of ``encode_model``.

    Raises:
        FormatError: On bad magic or version, truncated payloads, unknown
            tags, trailing bytes, or a topology that does not compose.
    """
    reader = _Reader(data)
    reader.magic(MODEL_MAGIC)
    reader.version()
    layer_count = reader.u32()
    layers = []
    for _ in range(layer_count):
        start = reader.offset
        try:
            layers.append(_decode_layer(reader))
        except FormatError:
            raise
        except CleverPruneError as exc:
            raise FormatError(f"Invalid layer parameters: {exc}", offset=start)
    class_count = reader.u32()
    rank = reader.u32()
    input_shape = tuple(reader.u32s(rank))
    site_count = reader.u32()
    sites = reader.u32s(site_count)
    end = reader.offset
    reader.expect_end()
    try:
        return Model(layers, class_count, input_shape, sites)
    except CleverPruneError as exc:
        raise FormatError(f"Inconsistent model topology: {exc}", offset=end)


def save(model: Model, path: PathLike) -> Path:
    """Write ``model`` to ``path`` (parent directories are created)."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_bytes(encode_model(model))
    logger.debug(f"Saved model with {len(model.layers)} layers to {target}")
    return target


def load(path: PathLike) -> Model:
    return decode_model(Path(path).read_bytes())


def encode_tensor(tensor: Tensor) -> bytes:
    out = _Writer()
    out.raw(TENSOR_MAGIC)
    out.u32(FORMAT_VERSION, tensor.ndim, *tensor.shape)
    out.f64(tensor)
    return out.getvalue()


def decode_tensor(data: bytes) -> Tensor:
    reader = _Reader(data)
    reader.magic(TENSOR_MAGIC)
    reader.version()
    rank = reader.u32()
    shape = reader.u32s(rank)
    tensor = reader.f64(*shape)
    reader.expect_end()
    return tensor


def save_tensor(tensor: Tensor, path: PathLike) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_bytes(encode_tensor(tensor))
    return target


def load_tensor(path: PathLike) -> Tensor:
    return decode_tensor(Path(path).read_bytes())
