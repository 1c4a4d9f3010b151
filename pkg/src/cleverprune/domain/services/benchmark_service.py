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

Module: src/cleverprune/domain/services/benchmark_service.py

Clever-Hans Benchmark Service

Builds one benchmark run from a seed: a glyph training set in which a
fraction of one class carries the artifact, a Clever-Hans model trained
on it, a clean pool of available data for refinement, and a clean test
set with its fully poisoned counterpart. Every stage draws from its own
named sub-stream of the run seed, so changing one stage (say, the test
set size) leaves the others bit-identical.

The service also evaluates models on a run and computes the activation
diagnostics (artifact footprint sparsity and clean/poisoned separability)
at the refinable sites.

Version: 0.1.0
License: Apache 2.0
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from cleverprune.domain.entities.dataset import Dataset
from cleverprune.domain.entities.metrics_report import MetricsReport
from cleverprune.domain.entities.model import Model
from cleverprune.domain.value_objects.artifact_spec import ArtifactSpec, CornerPixels
from cleverprune.domain.value_objects.tensor import SeededRng
from cleverprune.infrastructure.chbench.artifacts import inject_batch
from cleverprune.infrastructure.chbench.glyphs import generate_dataset
from cleverprune.infrastructure.chbench.metrics import (
    evaluate,
    separability_r2,
    sparsity,
)
from cleverprune.infrastructure.chbench.poisoning import poison
from cleverprune.infrastructure.network import TrainingLog, build_desk_cnn, train

__version__ = "0.1.0"

logger = logging.getLogger(__name__)

SPARSITY_IMAGES = 100
SEPARABILITY_SAMPLES = 10


@dataclass(frozen=True)
class BenchmarkSetup:
    """Everything that shapes a benchmark run except its seed.

    Attributes:
        classes (int): Number of glyph classes.
        size (int): Image side length.
        n_per_class_train (int): Training samples per class.
        n_per_class_available (int): Clean pool per class for refinement.
        n_per_class_test (int): Test samples per class.
        target_class (int): Class whose training samples carry the artifact.
        p_train (float): Fraction of the target class that is poisoned.
        artifact (ArtifactSpec): The spurious feature.
        conv_channels (Tuple[int, ...]): Filters per conv block.
        kernel (int): Conv kernel size.
        hidden (int): Width of the hidden dense layer.
        epochs (int): Training epochs.
        lr (float): Adam step size.
        batch (int): Mini-batch size.
        clip (Optional[float]): Elementwise gradient clip.
    """

    classes: int = 10
    size: int = 16
    n_per_class_train: int = 200
    n_per_class_available: int = 100
    n_per_class_test: int = 100
    target_class: int = 8
    p_train: float = 0.7
    artifact: ArtifactSpec = field(default_factory=CornerPixels)
    conv_channels: Tuple[int, ...] = (8, 16)
    kernel: int = 3
    hidden: int = 64
    epochs: int = 10
    lr: float = 1e-3
    batch: int = 32
    clip: Optional[float] = None


@dataclass
class BenchmarkRun:
    """Data and trained model of one seeded run."""

    seed: int
    setup: BenchmarkSetup
    model: Model
    training_log: TrainingLog
    train: Dataset
    available: Dataset
    clean_test: Dataset
    poisoned_test: Dataset


class BenchmarkService:
    """Seeded Clever-Hans benchmark runs on the glyph dataset.

    Example:
        >>> service = BenchmarkService(BenchmarkSetup(epochs=2))
        >>> run = service.prepare(seed=7)
        >>> report = service.evaluate(run.model, run)
    """

    def __init__(self, setup: Optional[BenchmarkSetup] = None):
        self.setup = setup or BenchmarkSetup()

    def build_data(self, seed: int) -> Tuple[Dataset, Dataset, Dataset, Dataset]:
        """Poisoned training set, clean available pool, clean and poisoned test sets.

        The poisoned test set is the clean one with the artifact on every
        sample of every class, so both sets share labels and group tags.
        """
        s = self.setup
        rng = SeededRng(seed)
        clean_train = generate_dataset(seed, s.n_per_class_train, s.classes, s.size, "train")
        train_set = poison(
            clean_train, s.target_class, s.p_train, s.artifact, rng.child("poison-train")
        )
        available = generate_dataset(seed, s.n_per_class_available, s.classes, s.size, "available")
        clean_test = generate_dataset(seed, s.n_per_class_test, s.classes, s.size, "test")
        poisoned_test = poison(clean_test, None, 1.0, s.artifact, rng.child("poison-test"))
        logger.debug(
            f"Seed {seed}: {int(np.sum(train_set.artifact_flags))} poisoned training samples "
            f"in class {s.target_class}"
        )
        return train_set, available, clean_test, poisoned_test

    def train_model(self, seed: int, data: Dataset) -> Tuple[Model, TrainingLog]:
        """Initialise the desk CNN from the run seed and fit it on ``data``."""
        s = self.setup
        rng = SeededRng(seed)
        model = build_desk_cnn(
            rng.child("init"),
            input_shape=data.image_shape,
            class_count=s.classes,
            conv_channels=s.conv_channels,
            kernel=s.kernel,
            hidden=s.hidden,
        )
        log = train(
            model,
            data.images,
            data.labels,
            epochs=s.epochs,
            lr=s.lr,
            batch=s.batch,
            rng=rng.child("shuffle"),
            clip=s.clip,
        )
        return model, log

    def prepare(self, seed: int) -> BenchmarkRun:
        """Generate the data of run ``seed`` and train its Clever-Hans model."""
        train_set, available, clean_test, poisoned_test = self.build_data(seed)
        model, log = self.train_model(seed, train_set)
        logger.info(f"Run {seed}: trained desk CNN for {len(log.epoch_losses)} epochs")
        return BenchmarkRun(
            seed=seed,
            setup=self.setup,
            model=model,
            training_log=log,
            train=train_set,
            available=available,
            clean_test=clean_test,
            poisoned_test=poisoned_test,
        )

    def evaluate(self, model: Model, run: BenchmarkRun) -> MetricsReport:
        """Clean/poisoned accuracy and per-group recall on the target class."""
        return evaluate(
            model,
            run.clean_test,
            run.poisoned_test,
            positive_class=self.setup.target_class,
            run_seed=run.seed,
        )

    def diagnostics(
        self,
        model: Model,
        run: BenchmarkRun,
        sites: Optional[Sequence[int]] = None,
    ) -> Tuple[Dict[int, Optional[float]], Dict[int, float]]:
        """Artifact sparsity and clean/poisoned separability per site.

        Sparsity uses up to 100 clean test images of the target class;
        separability the first 10 clean test images and their poisoned copies.
        """
        sites = list(model.refinable_sites if sites is None else sites)
        clean = run.clean_test
        target_images = clean.images[clean.class_indices(self.setup.target_class)][:SPARSITY_IMAGES]
        footprint = sparsity(model, target_images, self.setup.artifact, sites)

        paired = clean.images[:SEPARABILITY_SAMPLES]
        separability = separability_r2(
            model, paired, inject_batch(paired, self.setup.artifact), sites
        )
        return footprint, separability
