"""Shared quick-to-train models for the service and CLI tests."""

import io

import numpy as np
import pytest

from cypurnn.datasets import load_table1_samples, sensor_features, sensor_targets
from cypurnn.disease import LeafDiseaseClassifier, save_disease_model
from cypurnn.regression import published_model
from cypurnn.sensor_yield import SensorYieldRegressor, save_yield_model
from cypurnn.synthetic import generate_leaf_dataset


@pytest.fixture(scope="session")
def quick_yield_model():
    samples = load_table1_samples()
    return SensorYieldRegressor(seed=1, epochs=400).fit(
        sensor_features(samples), sensor_targets(samples))


@pytest.fixture(scope="session")
def quick_disease_model():
    images, labels = generate_leaf_dataset(8, size=16, seed=1)
    return LeafDiseaseClassifier(input_size=16, epochs=25, seed=1).fit(images, labels)


@pytest.fixture(scope="session")
def full_model_dir(tmp_path_factory, quick_yield_model, quick_disease_model):
    directory = tmp_path_factory.mktemp("models")
    published_model().save(directory / "mlr.json")
    save_yield_model(quick_yield_model, directory)
    save_disease_model(quick_disease_model, directory)
    return directory


def png_bytes(image_chw: np.ndarray) -> bytes:
    """Encode a (3, h, w) float image in [0, 1] as PNG."""
    from PIL import Image

    pixels = (image_chw.transpose(1, 2, 0) * 255.0).round().astype(np.uint8)
    buffer = io.BytesIO()
    Image.fromarray(pixels, mode="RGB").save(buffer, format="PNG")
    return buffer.getvalue()
