"""
Module: src/cleverprune/application/use_cases/explain_use_case.py

Explain Use Case

Attributes one clean test sample's prediction to the units of the model
and writes the relevance table (layer, unit, R). LRP yields every layer
in one backward pass; for Gradient x Input and Integrated Gradients the
table covers the input and the refinable sites. ``explain.layer``
restricts the table to one layer (-1 for the input).

Version: 0.1.0
License: Apache 2.0
"""

import logging
from pathlib import Path

import numpy as np

from cleverprune.application.dto.experiment_config import ExperimentConfig
from cleverprune.application.use_cases.run_directory import RunDirectory
from cleverprune.domain.entities.relevance import INPUT_LAYER, RelevanceMap
from cleverprune.domain.errors import ConfigError
from cleverprune.domain.value_objects.attribution_method import LRP
from cleverprune.infrastructure import model_store
from cleverprune.infrastructure.attribution import lrp, relevance_at
from cleverprune.infrastructure.chbench.dataset_store import load_dataset
from cleverprune.infrastructure.network import predict
from cleverprune.infrastructure.reports import relevance_frame, write_frame

__version__ = "0.1.0"

logger = logging.getLogger(__name__)


class ExplainUseCase:
    """Use case for per-unit relevance of a single prediction."""

    def execute(self, config: ExperimentConfig) -> RelevanceMap:
        """Explain ``explain.sample_index`` of the stored clean test set.

        The target defaults to the model's predicted class.

        Raises:
            ConfigError: If files are missing, the sample index is out of range
                or ``explain.layer`` is not one of the explained layers.
        """
        out = RunDirectory(config.output_dir)
        model_path = Path(config.model_path) if config.model_path else out.model
        model = model_store.load(out.require(model_path))
        clean = load_dataset(out.require(out.clean_test))
        request = config.explain
        if request.sample_index >= len(clean):
            raise ConfigError(
                f"sample_index {request.sample_index} outside the {len(clean)} test samples"
            )

        x = clean.images[request.sample_index]
        target = request.target
        if target is None:
            target = int(predict(model, x[None])[0])
        method = request.attribution()
        if isinstance(method, LRP):
            explained = [INPUT_LAYER, *range(len(model.layers))]
        else:
            explained = [INPUT_LAYER, *model.refinable_sites]
        if request.layer is not None and request.layer not in explained:
            raise ConfigError(
                f"explain.layer {request.layer} is not explained by {request.method} "
                f"(available: {explained})"
            )

        if isinstance(method, LRP):
            relevance = lrp(model, x, target, method)
        else:
            relevance = RelevanceMap(target=target)
            for layer in explained:
                relevance.layers[layer] = relevance_at(
                    model, x, target, None if layer == INPUT_LAYER else layer, method
                )

        layers = None if request.layer is None else [request.layer]
        frame = relevance_frame(relevance, layers)
        write_frame(frame, out.relevance)
        logger.info(
            f"Explained sample {request.sample_index} (target {target}) with "
            f"{request.method}: total input relevance "
            f"{float(np.sum(relevance[INPUT_LAYER])):.6g}"
        )
        return relevance
