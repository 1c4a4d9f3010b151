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

Module: tests/unit/test_chbench.py

Clever-Hans Benchmark Unit Tests

Covers the glyph generator, artifact injection, poisoning, refinement-set
selection, evaluation metrics and the dataset container.

Version: 0.1.0
License: Apache 2.0
"""

import numpy as np
import pytest

from cleverprune.domain.entities.dataset import Dataset
from cleverprune.domain.errors import DomainValueError, FormatError, PreconditionError
from cleverprune.domain.value_objects.artifact_spec import (
    Blur,
    CornerPixels,
    Frame,
    IntensityShift,
    LowerErase,
    Patch,
    artifact_from_name,
)
from cleverprune.domain.value_objects.tensor import SeededRng
from cleverprune.infrastructure.chbench.artifacts import artifact_mask, inject_artifact
from cleverprune.infrastructure.chbench.dataset_store import load_dataset, save_dataset
from cleverprune.infrastructure.chbench.glyphs import generate_dataset
from cleverprune.infrastructure.chbench.metrics import (
    cosine_distances,
    evaluate,
    logit_shift,
    separability_from_vectors,
    sparsity,
    sparsity_ratio,
)
from cleverprune.infrastructure.chbench.poisoning import (
    poison,
    poisoned_count,
    select_refinement_set,
)
from cleverprune.infrastructure.network import build_desk_cnn, predict
from cleverprune.infrastructure.refine import apply_scaling

__version__ = "0.1.0"


@pytest.fixture
def glyphs():
    return generate_dataset(seed=3, n_per_class=4, classes=3, size=12)


@pytest.fixture
def glyph_cnn():
    return build_desk_cnn(SeededRng(6), (1, 12, 12), 3, (2, 4), 3, 8)


def test_glyphs_are_deterministic_and_balanced(glyphs):
    again = generate_dataset(seed=3, n_per_class=4, classes=3, size=12)
    other_split = generate_dataset(seed=3, n_per_class=4, classes=3, size=12, split="test")

    np.testing.assert_array_equal(glyphs.images, again.images)
    np.testing.assert_array_equal(np.bincount(glyphs.labels), [4, 4, 4])
    assert glyphs.image_shape == (1, 12, 12)
    assert not glyphs.artifact_flags.any()
    assert not np.array_equal(glyphs.images, other_split.images)
    assert glyphs.images.min() >= 0.0 and glyphs.images.max() <= 1.0


@pytest.mark.parametrize(
    "kwargs", [{"n_per_class": 0}, {"n_per_class": 1, "classes": 11}, {"n_per_class": 1, "size": 8}]
)
def test_glyph_generator_rejects_bad_sizes(kwargs):
    with pytest.raises(DomainValueError):
        generate_dataset(seed=0, **kwargs)


def test_corner_artifact_sets_three_pixels():
    out = inject_artifact(np.zeros((1, 16, 16)), CornerPixels())
    assert out.sum() == 3.0
    assert out[0, 0, 0] == out[0, 0, 1] == out[0, 1, 0] == 1.0


def test_blur_keeps_constant_interior():
    out = inject_artifact(np.full((1, 8, 8), 0.5), Blur(3))
    np.testing.assert_allclose(out[0, 1:-1, 1:-1], 0.5)
    assert out[0, 0, 0] == pytest.approx(0.5 * 4 / 9)


def test_blur_spreads_an_impulse_into_a_plateau():
    image = np.zeros((1, 9, 9))
    image[0, 4, 4] = 1.0
    out = inject_artifact(image, Blur(3))

    expected = np.zeros((9, 9))
    expected[3:6, 3:6] = 1.0 / 9.0
    np.testing.assert_allclose(out[0], expected, atol=1e-15)


def test_lower_erase_and_intensity_shift():
    erased = inject_artifact(np.ones((1, 5, 4)), LowerErase(0.5))
    assert erased[0, :2].sum() == 8.0
    assert erased[0, 2:].sum() == 0.0

    shifted = inject_artifact(np.full((1, 2, 2), 0.9), IntensityShift(0.25))
    np.testing.assert_array_equal(shifted, np.ones((1, 2, 2)))


@pytest.mark.parametrize(
    "spec", [CornerPixels(), LowerErase(0.25), Frame(1, 0.5), Patch(0, 8, 4)]
)
def test_artifacts_stay_inside_their_mask(spec):
    """Pixels outside the artifact mask are never changed."""
    image = SeededRng(2).uniform(0.2, 0.8, (1, 12, 12))
    out = inject_artifact(image, spec)
    mask = artifact_mask(spec, image.shape)
    np.testing.assert_array_equal(out[~mask], image[~mask])
    assert not np.array_equal(out[mask], image[mask])


def test_patch_must_fit_the_image():
    with pytest.raises(DomainValueError):
        inject_artifact(np.zeros((1, 8, 8)), Patch(0, 6, 4))


@pytest.mark.parametrize("p, n, expected", [(0.7, 10, 7), (0.25, 10, 3), (0.05, 10, 1), (0.0, 10, 0)])
def test_poisoned_count_rounds_half_up(p, n, expected):
    assert poisoned_count(p, n) == expected


def test_poison_only_touches_the_target_class(glyphs):
    poisoned = poison(glyphs, 1, 0.5, CornerPixels(), SeededRng(0))
    flagged = np.flatnonzero(poisoned.artifact_flags)

    assert len(flagged) == 2
    assert np.all(poisoned.labels[flagged] == 1)
    assert poisoned.artifact["kind"] == "corner"
    unflagged = ~poisoned.artifact_flags
    np.testing.assert_array_equal(poisoned.images[unflagged], glyphs.images[unflagged])
    assert not glyphs.artifact_flags.any()


def test_zero_rate_returns_the_same_dataset(glyphs):
    assert poison(glyphs, 1, 0.0, CornerPixels(), SeededRng(0)) is glyphs


def test_poison_every_class(glyphs):
    poisoned = poison(glyphs, None, 1.0, artifact_from_name("frame"), SeededRng(0))
    assert poisoned.artifact_flags.all()


def test_poison_rejects_bad_rate(glyphs):
    with pytest.raises(DomainValueError):
        poison(glyphs, 0, 1.5, CornerPixels(), SeededRng(0))


def test_refinement_set_is_correct_and_balanced(glyphs, glyph_cnn):
    """Test selection of the clean, correctly predicted refinement set.

    Validates:
        - Only correctly predicted samples are used
        - Each class contributes exactly ``n_per_class`` samples, topped up
          by resampling when too few are correct
    """
    labels = predict(glyph_cnn, glyphs.images)
    relabelled = Dataset(
        images=glyphs.images,
        labels=labels,
        artifact_flags=glyphs.artifact_flags,
        class_count=3,
    )
    present = [k for k in range(3) if np.any(labels == k)]
    if len(present) < 3:
        with pytest.raises(PreconditionError):
            select_refinement_set(glyph_cnn, relabelled, 5, SeededRng(0))
        return

    chosen = select_refinement_set(glyph_cnn, relabelled, 5, SeededRng(0))
    assert len(chosen) == 15
    np.testing.assert_array_equal(predict(glyph_cnn, chosen.images), chosen.labels)
    np.testing.assert_array_equal(np.bincount(chosen.labels, minlength=3), [5, 5, 5])


def test_refinement_set_must_be_clean(glyphs, glyph_cnn):
    poisoned = poison(glyphs, 0, 1.0, CornerPixels(), SeededRng(0))
    with pytest.raises(PreconditionError):
        select_refinement_set(glyph_cnn, poisoned, 2, SeededRng(0))


def test_sparsity_ratio_bounds():
    assert sparsity_ratio(np.array([0.0, 3.0, 0.0])) == 1.0
    assert sparsity_ratio(np.ones(4)) == pytest.approx(0.5)
    assert sparsity_ratio(np.zeros(3)) is None


def test_sparsity_ratio_of_norm_example():
    assert sparsity_ratio(np.array([3.0, -4.0])) == pytest.approx(5.0 / 7.0)


def test_sparsity_ratio_stays_within_its_bounds_on_random_vectors():
    """Test ``1/sqrt(n) <= ||x||_2 / ||x||_1 <= 1`` on random differences.

    Validates:
        - The bounds hold for dense and sparse random vectors
        - Concentrating the same l1 mass onto fewer units raises the ratio
    """
    rng = SeededRng(17)
    for n in (1, 2, 7, 64):
        for _ in range(20):
            delta = rng.normal(size=n) * (rng.uniform(size=n) < 0.5)
            ratio = sparsity_ratio(delta)
            if ratio is None:
                continue
            assert 1.0 / np.sqrt(n) - 1e-12 <= ratio <= 1.0 + 1e-12

    spread = sparsity_ratio(np.full(8, 0.25))
    half = sparsity_ratio(np.r_[np.full(4, 0.5), np.zeros(4)])
    single = sparsity_ratio(np.r_[2.0, np.zeros(7)])
    assert spread < half < single == 1.0


def test_sparsity_per_site(glyphs, glyph_cnn):
    values = sparsity(glyph_cnn, glyphs.images[:4], CornerPixels(), [1, 8])
    assert set(values) == {1, 8}
    for value in values.values():
        assert value is None or 0.0 < value <= 1.0


def test_separability_of_identical_groups_is_zero():
    vectors = SeededRng(1).normal(size=(5, 4))
    assert separability_from_vectors(vectors, vectors) == pytest.approx(0.0, abs=1e-12)


def test_separability_of_orthogonal_groups():
    clean = np.tile([1.0, 0.0], (3, 1))
    poisoned = np.tile([0.0, 1.0], (3, 1))
    assert separability_from_vectors(clean, poisoned) == pytest.approx(1.0)


def test_cosine_distance_to_zero_vector_is_one():
    np.testing.assert_array_equal(cosine_distances(np.zeros((1, 3)), np.ones((1, 3))), [[1.0]])


def test_evaluate_and_logit_shift(glyphs, glyph_cnn):
    poisoned = poison(glyphs, None, 1.0, CornerPixels(), SeededRng(0))
    report = evaluate(glyph_cnn, glyphs, poisoned, positive_class=1, run_seed=3)

    assert 0.0 <= report.accuracy_clean <= 1.0
    assert report.run_seed == 3
    assert set(report.recall_by_group) <= {"thick", "slanted", "small"}

    same = logit_shift(glyph_cnn, glyph_cnn.copy(), glyphs, poisoned)
    assert same["clean_max"] == 0.0 and same["poisoned_mean"] == 0.0

    damped = apply_scaling(glyph_cnn, 8, np.zeros(8))
    shift = logit_shift(glyph_cnn, damped, glyphs, poisoned)
    assert shift["clean_q05"] <= shift["clean_q50"] <= shift["clean_max"]


def test_dataset_store_preserves_every_field(tmp_path, glyphs):
    poisoned = poison(glyphs, 2, 0.5, Patch(0, 8, 4), SeededRng(1))
    path = save_dataset(poisoned, tmp_path / "data" / "set.egts")
    loaded = load_dataset(path)

    np.testing.assert_array_equal(loaded.images, poisoned.images)
    np.testing.assert_array_equal(loaded.artifact_flags, poisoned.artifact_flags)
    np.testing.assert_array_equal(loaded.group_tags, poisoned.group_tags)
    assert loaded.artifact == poisoned.artifact


def test_dataset_store_needs_the_sidecar(tmp_path, glyphs):
    path = save_dataset(glyphs, tmp_path / "set.egts")
    path.with_suffix(".json").unlink()
    with pytest.raises(FormatError):
        load_dataset(path)
