"""
Module: src/cleverprune/infrastructure/chbench/dataset_store.py

Dataset persistence: images in the binary tensor record, everything else
(labels, flags, group tags, seed, class count, artifact spec) in a JSON
sidecar next to it.

Version: 0.1.0
License: Apache 2.0
"""

import json
import logging
from pathlib import Path
from typing import Tuple

from cleverprune.domain.entities.dataset import Dataset
from cleverprune.domain.errors import FormatError
from cleverprune.infrastructure.model_store import PathLike, load_tensor, save_tensor

__version__ = "0.1.0"

logger = logging.getLogger(__name__)

SIDECAR_SUFFIX = ".json"


def _paths(path: PathLike) -> Tuple[Path, Path]:
    target = Path(path)
    return target, target.with_suffix(SIDECAR_SUFFIX)


def save_dataset(dataset: Dataset, path: PathLike) -> Path:
    """Write ``dataset`` to ``path`` plus its JSON sidecar."""
    images_path, sidecar_path = _paths(path)
    save_tensor(dataset.images, images_path)
    sidecar = {
        "class_count": dataset.class_count,
        "seed": dataset.seed,
        "labels": dataset.labels.tolist(),
        "artifact_flags": dataset.artifact_flags.tolist(),
        "group_tags": dataset.group_tags.tolist(),
        "artifact": dataset.artifact,
    }
    sidecar_path.write_text(json.dumps(sidecar, sort_keys=True))
    logger.debug(f"Saved {len(dataset)} samples to {images_path}")
    return images_path


def load_dataset(path: PathLike) -> Dataset:
    """Inverse of ``save_dataset``.

    Raises:
        FormatError: If the image record or the sidecar is malformed.
    """
    images_path, sidecar_path = _paths(path)
    images = load_tensor(images_path)
    try:
        sidecar = json.loads(sidecar_path.read_text())
        return Dataset(
            images=images,
            labels=sidecar["labels"],
            artifact_flags=sidecar["artifact_flags"],
            class_count=int(sidecar["class_count"]),
            seed=int(sidecar["seed"]),
            group_tags=sidecar["group_tags"],
            artifact=sidecar.get("artifact"),
        )
    except (OSError, KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"Invalid dataset sidecar {sidecar_path}: {exc}")
