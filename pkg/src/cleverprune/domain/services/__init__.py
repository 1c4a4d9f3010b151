"""
Module: src/cleverprune/domain/services/__init__.py
"""

from cleverprune.domain.services.benchmark_service import (
    BenchmarkRun,
    BenchmarkService,
    BenchmarkSetup,
)
from cleverprune.domain.services.refinement_service import (
    RefinementOutcome,
    RefinementService,
)

__all__ = [
    "BenchmarkRun",
    "BenchmarkService",
    "BenchmarkSetup",
    "RefinementOutcome",
    "RefinementService",
]
