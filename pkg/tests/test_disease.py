import numpy as np
import pytest

from cypurnn.disease import (CLASS_NAMES, DiseaseClass, LeafDiseaseClassifier,
                             ailment_text, load_disease_model, preprocess_image,
                             save_disease_model)
from cypurnn.nn import accuracy
from cypurnn.synthetic import generate_leaf_dataset, generate_leaf_image


@pytest.fixture(scope="module")
def small_sets():
    train = generate_leaf_dataset(8, size=16, seed=1)
    test = generate_leaf_dataset(4, size=16, seed=5)
    return train, test


@pytest.fixture(scope="module")
def small_model(small_sets):
    (Xtr, ytr), _ = small_sets
    return LeafDiseaseClassifier(input_size=16, epochs=25, seed=1).fit(Xtr, ytr)


class TestDiseaseClassCodes:
    def test_stable_codes_and_labels(self):
        assert [int(c) for c in DiseaseClass] == [0, 1, 2, 3]
        assert tuple(c.label for c in DiseaseClass) == CLASS_NAMES
        assert CLASS_NAMES == ("Healthy", "Hispa", "LeafBlast", "BrownSpot")


class TestAilmentText:
    def test_published_strings(self):
        assert ailment_text(DiseaseClass.HEALTHY) == "No ailment detected in given sample"
        assert ailment_text(DiseaseClass.HISPA) == \
            "Ailment detected in plant sample. Possible ailment- Hispa, Dryness"
        assert ailment_text(DiseaseClass.LEAF_BLAST) == \
            "Ailment detected in plant sample. Possible ailment- Fungal infection, Leaf Blast"
        assert ailment_text(DiseaseClass.BROWN_SPOT) == \
            "Ailment detected in plant sample. Possible ailment- Black Spots, Brown Spots"

    def test_injective_over_classes(self):
        texts = {ailment_text(c) for c in DiseaseClass}
        assert len(texts) == 4

    def test_accepts_plain_ints(self):
        assert "Hispa" in ailment_text(1)


class TestPreprocess:
    def test_constant_gray_image(self):
        raw = np.full((64, 64, 3), 128, dtype=np.uint8)
        out = preprocess_image(raw, 64)
        assert out.shape == (3, 64, 64)
        assert np.allclose(out, 128 / 255)

    def test_single_black_pixel_upscales_to_zeros(self):
        out = preprocess_image(np.zeros((1, 1, 3), dtype=np.uint8), 8)
        assert out.shape == (3, 8, 8)
        assert np.all(out == 0.0)

    def test_target_size_input_keeps_geometry(self):
        rng = np.random.default_rng(0)
        raw = rng.integers(0, 256, size=(32, 32, 3)).astype(np.uint8)
        out = preprocess_image(raw, 32)
        assert np.array_equal(out, raw.transpose(2, 0, 1) / 255.0)

    def test_grayscale_replicated_to_three_channels(self):
        raw = np.arange(16, dtype=np.uint8).reshape(4, 4) * 16
        out = preprocess_image(raw, 4)
        assert out.shape == (3, 4, 4)
        assert np.array_equal(out[0], out[1])
        assert np.array_equal(out[1], out[2])

    def test_values_land_in_unit_interval(self):
        rng = np.random.default_rng(1)
        raw = rng.integers(0, 256, size=(20, 30, 3)).astype(np.uint8)
        out = preprocess_image(raw, 10)
        assert out.min() >= 0.0 and out.max() <= 1.0

    def test_empty_image_rejected(self):
        with pytest.raises(ValueError, match="pixels"):
            preprocess_image(np.zeros((0, 4, 3)), 8)

    def test_unsupported_channel_count_rejected(self):
        with pytest.raises(ValueError, match="unsupported"):
            preprocess_image(np.zeros((4, 4, 4)), 8)


class TestClassifier:
    def test_probabilities_sum_to_one(self, small_model, small_sets):
        _, (Xte, _) = small_sets
        probs = small_model.predict_proba(Xte)
        assert np.max(np.abs(probs.sum(axis=1) - 1.0)) < 1e-12

    def test_confidence_is_max_softmax_probability(self, small_model, small_sets):
        _, (Xte, _) = small_sets
        diagnosis = small_model.diagnose(Xte[0])
        probs = small_model.predict_proba(Xte[:1])[0]
        assert diagnosis.confidence_pct == pytest.approx(100 * probs.max(), abs=1e-12)
        assert int(diagnosis.predicted_class) == int(probs.argmax())

    def test_diagnosis_fields(self, small_model, small_sets):
        _, (Xte, _) = small_sets
        diagnosis = small_model.diagnose(Xte[0])
        assert diagnosis.species == "Oryza sativa"
        assert diagnosis.category == "Non-leguminous plant"
        assert diagnosis.ailment_text == ailment_text(diagnosis.predicted_class)

    def test_learns_the_small_synthetic_set(self, small_model, small_sets):
        (Xtr, ytr), (Xte, yte) = small_sets
        assert small_model.history_.final.accuracy >= 0.95
        assert accuracy(small_model.predict(Xte), yte) >= 0.75
        assert small_model.history_.final.accuracy > small_model.history_.records[0].accuracy

    def test_training_is_input_order_invariant(self, small_sets):
        (Xtr, ytr), _ = small_sets
        rng = np.random.default_rng(3)
        perm = rng.permutation(len(ytr))
        a = LeafDiseaseClassifier(input_size=16, epochs=4, seed=2).fit(Xtr, ytr)
        b = LeafDiseaseClassifier(input_size=16, epochs=4, seed=2).fit(Xtr[perm], ytr[perm])
        for pa, pb in zip(a.net_.parameters(), b.net_.parameters()):
            assert pa.tobytes() == pb.tobytes()

    def test_empty_and_bad_labels_rejected(self):
        clf = LeafDiseaseClassifier(input_size=16, epochs=1)
        with pytest.raises(ValueError, match="empty"):
            clf.fit(np.zeros((0, 3, 16, 16)), np.zeros(0, dtype=int))
        with pytest.raises(ValueError, match="labels"):
            clf.fit(np.zeros((2, 3, 16, 16)), np.array([0, 7]))

    def test_wrong_image_size_rejected(self, small_model):
        with pytest.raises(ValueError, match="shape"):
            small_model.predict_proba(np.zeros((1, 3, 20, 20)))


class TestSyntheticGenerator:
    def test_images_are_unit_interval_rgb(self):
        rng = np.random.default_rng(0)
        for disease in DiseaseClass:
            img = generate_leaf_image(disease, rng, 32)
            assert img.shape == (3, 32, 32)
            assert img.min() >= 0.0 and img.max() <= 1.0

    def test_dataset_is_balanced_and_seeded(self):
        X1, y1 = generate_leaf_dataset(5, size=16, seed=9)
        X2, y2 = generate_leaf_dataset(5, size=16, seed=9)
        assert X1.shape == (20, 3, 16, 16)
        assert np.bincount(y1).tolist() == [5, 5, 5, 5]
        assert np.array_equal(X1, X2) and np.array_equal(y1, y2)

    def test_different_seeds_differ(self):
        X1, _ = generate_leaf_dataset(2, size=16, seed=1)
        X2, _ = generate_leaf_dataset(2, size=16, seed=2)
        assert not np.array_equal(X1, X2)


class TestPersistence:
    def test_round_trip_preserves_predictions(self, small_model, small_sets, tmp_path):
        _, (Xte, _) = small_sets
        save_disease_model(small_model, tmp_path)
        loaded = load_disease_model(tmp_path)
        assert loaded.input_size == 16
        assert np.array_equal(loaded.predict_proba(Xte), small_model.predict_proba(Xte))

    def test_sidecar_fields(self, small_model, tmp_path):
        import json
        save_disease_model(small_model, tmp_path)
        sidecar = json.loads((tmp_path / "disease.meta.json").read_text())
        assert sidecar["input_size"] == 16
        assert sidecar["class_names"] == list(CLASS_NAMES)
