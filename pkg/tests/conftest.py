"""
Module: tests/conftest.py

Shared fixtures: small seeded networks and inputs that keep every unit test
well under a second.

Version: 0.1.0
License: Apache 2.0
"""

import copy

import pytest

from cleverprune.domain.value_objects.tensor import SeededRng
from cleverprune.infrastructure.network import build_desk_cnn, build_mlp

__version__ = "0.1.0"


@pytest.fixture
def mlp():
    """6 -> 8 -> 5 -> 3 ReLU network with nonzero biases."""
    return build_mlp(SeededRng(0), [6, 8, 5, 3], bias_scale=0.1)


@pytest.fixture
def bias_free_mlp():
    return build_mlp(SeededRng(1), [6, 8, 5, 3])


@pytest.fixture
def cnn():
    """Two conv blocks on 1 x 12 x 12 inputs, 3 classes."""
    return build_desk_cnn(
        SeededRng(2),
        input_shape=(1, 12, 12),
        class_count=3,
        conv_channels=(2, 4),
        kernel=3,
        hidden=8,
    )


@pytest.fixture
def vectors():
    return SeededRng(3).uniform(0.0, 1.0, (20, 6))


@pytest.fixture
def images():
    return SeededRng(4).uniform(0.0, 1.0, (6, 1, 12, 12))


TINY_EXPERIMENT = {
    "seed": 3,
    "dataset": {
        "classes": 3,
        "size": 12,
        "n_per_class_train": 16,
        "n_per_class_available": 10,
        "n_per_class_test": 5,
        "target_class": 1,
        "p_train": 0.7,
    },
    "architecture": {"conv_channels": [4], "kernel": 3, "hidden": 16},
    "training": {"epochs": 30, "lr": 5e-3, "batch": 8},
    "method": "egem",
    "n_refine": 4,
    "sweep": {
        "slack_grid": [0.0, 5.0],
        "sample_grid": [3, 4],
        "artifacts": ["corner", "blur"],
        "methods": ["original", "egem"],
    },
    "explain": {"method": "gi", "sample_index": 2},
}


@pytest.fixture(scope="session")
def tiny_experiment():
    """Factory for an experiment small enough to train, refine and sweep in seconds."""

    def make(**updates):
        data = copy.deepcopy(TINY_EXPERIMENT)
        data.update(updates)
        return data

    return make
