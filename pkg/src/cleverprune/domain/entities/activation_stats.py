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

Module: src/cleverprune/domain/entities/activation_stats.py

Activation Statistics Entities

Second-moment statistics gathered from the available data at refinable
sites, and the PCA eigenbasis of a site's activations. These are the only
inputs the closed-form refinement rules need.

Version: 0.1.0
License: Apache 2.0
"""

from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from cleverprune.domain.errors import DimensionError, DomainValueError, PreconditionError
from cleverprune.domain.value_objects.tensor import Tensor

__version__ = "0.1.0"

ORTHONORMAL_ATOL = 1e-8


@dataclass
class SiteStats:
    """Statistics for one refinable site.

    Attributes:
        site (int): Layer index whose output the statistics describe.
        granularity (str): ``"unit"`` for dense activations, ``"channel"``
            for convolutional feature maps summed over space.
        unit_second_moment (Tensor): ``E[a_i^2]`` per unit or per channel.
        weighted_second_moments (Optional[Tensor]): ``E[a_i^2 d_j^2]`` as an
            ``in x out`` matrix over the edges into the next dense layer.
        message_second_moment (Optional[Tensor]): ``E[d_j^2]`` per output unit
            of the next dense layer.
    """

    site: int
    granularity: str
    unit_second_moment: Tensor
    weighted_second_moments: Optional[Tensor] = None
    message_second_moment: Optional[Tensor] = None

    def __post_init__(self):
        if np.any(self.unit_second_moment < 0):
            raise DomainValueError(f"Negative second moment at site {self.site}")

    @property
    def has_message_moments(self) -> bool:
        return (
            self.weighted_second_moments is not None
            and self.message_second_moment is not None
        )

    def require_message_moments(self) -> None:
        if not self.has_message_moments:
            raise PreconditionError(
                f"Site {self.site} carries no weighted second moments; "
                "collect statistics with a message-factor method"
            )


@dataclass
class ActivationStats:
    """Per-site statistics plus the last-layer feature Gram matrix.

    Attributes:
        sites (Dict[int, SiteStats]): Statistics keyed by layer index.
        gram (Optional[Tensor]): ``E[x x^T]`` over the final feature layer
            (the input of the last dense layer).
        sample_count (int): Number of samples the expectations average over.
    """

    sites: Dict[int, SiteStats] = field(default_factory=dict)
    gram: Optional[Tensor] = None
    sample_count: int = 1

    def __post_init__(self):
        if self.sample_count < 1:
            raise DomainValueError("ActivationStats needs at least one sample")

    def site(self, index: int) -> SiteStats:
        if index not in self.sites:
            raise PreconditionError(f"No statistics collected for site {index}")
        return self.sites[index]


@dataclass(frozen=True)
class PcaBasis:
    """Eigenbasis of a site's activation covariance.

    Attributes:
        components (Tensor): ``n x K`` matrix ``U`` with orthonormal columns,
            ordered by descending eigenvalue.
        mean (Tensor): Activation mean ``a_bar`` of length ``n``.
        eigenvalues (Tensor): ``K`` nonnegative eigenvalues, descending.
    """

    components: Tensor
    mean: Tensor
    eigenvalues: Tensor

    def __post_init__(self):
        n, k = self.components.shape
        if self.mean.shape != (n,) or self.eigenvalues.shape != (k,):
            raise DimensionError(
                f"PCA basis shapes disagree: U {self.components.shape}, "
                f"mean {self.mean.shape}, eigenvalues {self.eigenvalues.shape}"
            )
        gram = self.components.T @ self.components
        if not np.allclose(gram, np.eye(k), rtol=0.0, atol=ORTHONORMAL_ATOL):
            deviation = float(np.max(np.abs(gram - np.eye(k))))
            raise DomainValueError(
                f"PCA components are not orthonormal (max |U^T U - I| = {deviation:.3e})"
            )
        if np.any(self.eigenvalues < 0.0):
            raise DomainValueError("PCA eigenvalues must be nonnegative")
        if np.any(np.diff(self.eigenvalues) > 0.0):
            raise DomainValueError("PCA eigenvalues must be in descending order")

    @property
    def dimension(self) -> int:
        return self.components.shape[0]

    @property
    def rank(self) -> int:
        return self.components.shape[1]

    def project(self, activations: Tensor) -> Tensor:
        """Map ``N x n`` activations to ``N x K`` component scores ``h``."""
        return (activations - self.mean) @ self.components

    def reconstruct(self, scores: Tensor) -> Tensor:
        return scores @ self.components.T + self.mean
