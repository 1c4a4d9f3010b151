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

Module: src/cleverprune/domain/errors.py

cleverprune Error Hierarchy

Every failure raised by the library derives from CleverPruneError so that
callers (the CLI in particular) can map whole families of failures onto exit
codes. The concrete classes also derive from the closest builtin exception,
which keeps ``pytest.raises(ValueError)`` style checks working.

Version: 0.1.0
License: Apache 2.0
"""

from typing import Optional

__version__ = "0.1.0"


class CleverPruneError(Exception):
    """Base class for all cleverprune failures."""


class DimensionError(CleverPruneError, ValueError):
    """Operand shapes do not compose."""


class DomainValueError(CleverPruneError, ValueError):
    """An argument lies outside the domain of the operation."""


class PreconditionError(CleverPruneError, ValueError):
    """An operation was called without the inputs it requires."""


class ConfigError(CleverPruneError, ValueError):
    """The experiment configuration cannot be used as given."""


class FormatError(CleverPruneError, ValueError):
    """A binary container is malformed.

    Attributes:
        offset (Optional[int]): Byte offset at which decoding failed, when known.
    """

    def __init__(self, message: str, offset: Optional[int] = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)


class NumericalError(CleverPruneError, ArithmeticError):
    """A computation produced or would produce a non-finite result.

    Attributes:
        epoch (Optional[int]): Training epoch at which the failure happened.
        batch (Optional[int]): Mini-batch index within that epoch.
    """

    def __init__(
        self,
        message: str,
        epoch: Optional[int] = None,
        batch: Optional[int] = None,
    ):
        self.epoch = epoch
        self.batch = batch
        super().__init__(message)
