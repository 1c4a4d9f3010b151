"""
Module: src/cleverprune/infrastructure/chbench/__init__.py

Desk-scale Clever-Hans benchmark: glyph data, artifacts, poisoning,
refinement-set selection and evaluation metrics.

Version: 0.1.0
License: Apache 2.0
"""

from cleverprune.infrastructure.chbench.artifacts import (
    artifact_mask,
    inject_artifact,
    inject_batch,
)
from cleverprune.infrastructure.chbench.dataset_store import load_dataset, save_dataset
from cleverprune.infrastructure.chbench.glyphs import generate_dataset
from cleverprune.infrastructure.chbench.metrics import (
    evaluate,
    logit_shift,
    separability_r2,
    sparsity,
)
from cleverprune.infrastructure.chbench.poisoning import poison, select_refinement_set

__all__ = [
    "artifact_mask",
    "evaluate",
    "generate_dataset",
    "inject_artifact",
    "inject_batch",
    "load_dataset",
    "logit_shift",
    "poison",
    "save_dataset",
    "select_refinement_set",
    "separability_r2",
    "sparsity",
]
