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

Module: src/cleverprune/infrastructure/hypersearch/schedule.py

Per-layer Pruning Schedule

Turns one global strength ``alpha`` into a target mean pruning factor per
refined layer, growing linearly stronger with depth, and finds the
per-layer lambda that meets each target by exponential search followed by
bisection.

Version: 0.1.0
License: Apache 2.0
"""

import logging
from typing import Callable, Union

import numpy as np

from cleverprune.domain.entities.activation_stats import SiteStats
from cleverprune.domain.errors import DomainValueError, NumericalError
from cleverprune.domain.value_objects.schedule import LambdaSolution, Schedule
from cleverprune.domain.value_objects.tensor import Tensor

__version__ = "0.1.0"

logger = logging.getLogger(__name__)

LAMBDA_START = 1e-8
BISECTION_STEPS = 40
MAX_DOUBLINGS = 2000

MeanFactor = Callable[[float], float]


def triangular_thresholds(alpha: float, layers: int) -> Schedule:
    """``tau_l = 1 - (1 - alpha)(l - 1)/(L - 1)`` for ``l = 1..L``.

    A single refined layer gets ``alpha`` itself.

    Example:
        >>> triangular_thresholds(0.2, 5).thresholds
        (1.0, 0.8, 0.6, 0.4, 0.2)

    Raises:
        DomainValueError: If alpha leaves (0, 1] or ``layers < 1``.
    """
    if not 0.0 < alpha <= 1.0:
        raise DomainValueError(f"alpha must lie in (0, 1], got {alpha}")
    if layers < 1:
        raise DomainValueError(f"A schedule needs at least one layer, got {layers}")
    if layers == 1:
        return Schedule(alpha=alpha, thresholds=(float(alpha),))
    thresholds = tuple(
        1.0 - (1.0 - alpha) * step / (layers - 1) for step in range(layers)
    )
    return Schedule(alpha=alpha, thresholds=thresholds)


def moment_mean_factor(moments: Tensor) -> MeanFactor:
    """Mean of ``m / (m + lambda)`` over units, as a function of lambda."""
    m = np.asarray(moments, dtype=np.float64)

    def mean_factor(lam: float) -> float:
        if lam == 0.0:
            return 1.0
        return float(np.mean(m / (m + lam)))

    return mean_factor


def solve_lambda(
    target: Union[SiteStats, Tensor, MeanFactor], tau: float
) -> LambdaSolution:
    """Smallest lambda whose mean pruning factor is at most ``tau``.

    Starts at ``1e-8`` and doubles until the target is met, then bisects the
    last bracket 40 times and returns its upper end. ``tau = 1`` needs no
    pruning and yields 0.

    Args:
        target: Site statistics, raw second moments, or any non-increasing
            mean-factor function of lambda.
        tau (float): Target mean factor in (0, 1].

    Returns:
        LambdaSolution: The lambda, flagged when every unit is dead.

    Raises:
        DomainValueError: If tau leaves (0, 1].
        NumericalError: If the target cannot be reached.
    """
    if not 0.0 < tau <= 1.0:
        raise DomainValueError(f"tau must lie in (0, 1], got {tau}")
    if tau == 1.0:
        return LambdaSolution(0.0)
    if isinstance(target, SiteStats):
        target = target.unit_second_moment
    mean_factor = target if callable(target) else moment_mean_factor(target)

    if mean_factor(LAMBDA_START) == 0.0:
        logger.warning("Every unit at this site is dead; leaving it unpruned")
        return LambdaSolution(0.0, all_units_dead=True)

    lo, hi = 0.0, LAMBDA_START
    for _ in range(MAX_DOUBLINGS):
        if mean_factor(hi) <= tau:
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise NumericalError(f"No finite lambda reaches mean pruning factor {tau}")

    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        if mean_factor(mid) <= tau:
            hi = mid
        else:
            lo = mid
    return LambdaSolution(hi)
