"""Leaf-disease classification over four classes.

The classifier is a small convolutional network trained on preprocessed
RGB tensors; every diagnosis carries the fixed per-class ailment text,
the rice species, and the softmax confidence.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from enum import IntEnum
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.exceptions import NotFittedError

from .nn import (Conv2d, Dense, Flatten, MaxPool2d, Network, Relu, Softmax,
                 TrainConfig, train_classifier)

SPECIES = "Oryza sativa"
PLANT_CATEGORY = "Non-leguminous plant"
SIDECAR_FORMAT_VERSION = 1


class DiseaseClass(IntEnum):
    HEALTHY = 0
    HISPA = 1
    LEAF_BLAST = 2
    BROWN_SPOT = 3

    @property
    def label(self) -> str:
        return CLASS_NAMES[int(self)]


CLASS_NAMES = ("Healthy", "Hispa", "LeafBlast", "BrownSpot")

AILMENT_TEXTS = {
    DiseaseClass.HEALTHY: "No ailment detected in given sample",
    DiseaseClass.HISPA: "Ailment detected in plant sample. Possible ailment- Hispa, Dryness",
    DiseaseClass.LEAF_BLAST: "Ailment detected in plant sample. Possible ailment- Fungal infection, Leaf Blast",
    DiseaseClass.BROWN_SPOT: "Ailment detected in plant sample. Possible ailment- Black Spots, Brown Spots",
}


def ailment_text(disease: DiseaseClass) -> str:
    return AILMENT_TEXTS[DiseaseClass(disease)]


def preprocess_image(raw, target_size: int) -> np.ndarray:
    """Nearest-neighbor resize to (3, target_size, target_size), scaled to [0, 1].

    Accepts (h, w, 3) RGB or (h, w) grayscale arrays with values in
    [0, 255]; grayscale is replicated across the three channels.
    """
    raw = np.asarray(raw, dtype=np.float64)
    if raw.ndim == 2:
        raw = raw[:, :, None].repeat(3, axis=2)
    if raw.ndim != 3 or raw.shape[2] not in (1, 3):
        raise ValueError(f"unsupported image shape {raw.shape}; need (h, w[, 3])")
    if raw.shape[2] == 1:
        raw = raw.repeat(3, axis=2)
    h, w = raw.shape[:2]
    if h == 0 or w == 0:
        raise ValueError("image has no pixels")
    if target_size < 1:
        raise ValueError(f"target_size must be >= 1, got {target_size}")
    rows = np.minimum(((np.arange(target_size) + 0.5) * h / target_size).astype(int), h - 1)
    cols = np.minimum(((np.arange(target_size) + 0.5) * w / target_size).astype(int), w - 1)
    resized = raw[rows[:, None], cols[None, :], :]
    return resized.transpose(2, 0, 1) / 255.0


@dataclass(frozen=True)
class Diagnosis:
    predicted_class: DiseaseClass
    confidence_pct: float
    species: str
    category: str
    ailment_text: str


class LeafDiseaseClassifier(ClassifierMixin, BaseEstimator):
    """Conv(3->8)/pool/Conv(8->16)/pool/dense classifier over the four classes.

    Training canonicalizes example order (by label, then content digest)
    before the seeded shuffle, so a fixed seed yields the same model
    regardless of how the caller ordered the dataset.
    """

    def __init__(self, input_size: int = 64, epochs: int = 180, batch_size: int = 16,
                 learning_rate: float = 0.001, seed: int = 0):
        self.input_size = input_size
        self.epochs = epochs
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.seed = seed

    def _build_network(self, rng: np.random.Generator) -> Network:
        side = self.input_size
        side = (side - 2) // 2   # conv 3x3 valid, then pool 2x2
        side = (side - 2) // 2
        if side < 1:
            raise ValueError(f"input_size {self.input_size} is too small for the conv stack")
        return Network([
            Conv2d(3, 8, 3, rng), Relu(), MaxPool2d(2),
            Conv2d(8, 16, 3, rng), Relu(), MaxPool2d(2),
            Flatten(),
            Dense(16 * side * side, 64, rng), Relu(),
            Dense(64, len(CLASS_NAMES), rng), Softmax(),
        ], seed=self.seed)

    def fit(self, images, labels, val_images=None, val_labels=None):
        images = np.asarray(images, dtype=np.float64)
        labels = np.asarray(labels)
        if images.ndim != 4 or images.shape[1] != 3 \
                or images.shape[2:] != (self.input_size, self.input_size):
            raise ValueError(
                f"images must have shape (n, 3, {self.input_size}, {self.input_size}), "
                f"got {images.shape}"
            )
        if images.shape[0] == 0:
            raise ValueError("training set is empty")
        if np.any(labels < 0) or np.any(labels >= len(CLASS_NAMES)):
            raise ValueError(f"labels must lie in [0, {len(CLASS_NAMES)})")

        # input order must not matter: sort by (label, content digest)
        digests = [hashlib.sha256(img.tobytes()).hexdigest() for img in images]
        order = sorted(range(len(digests)), key=lambda i: (int(labels[i]), digests[i]))
        images, labels = images[order], labels[order]

        rng = np.random.default_rng(self.seed)
        self.net_ = self._build_network(rng)
        config = TrainConfig(epochs=self.epochs, batch_size=self.batch_size,
                             learning_rate=self.learning_rate, seed=self.seed)
        self.history_ = train_classifier(self.net_, images, labels, config,
                                         val_inputs=val_images, val_labels=val_labels)
        return self

    def predict_proba(self, images) -> np.ndarray:
        self._check_fitted()
        images = np.asarray(images, dtype=np.float64)
        if images.ndim != 4 or images.shape[2:] != (self.input_size, self.input_size):
            raise ValueError(
                f"images must have shape (n, 3, {self.input_size}, {self.input_size}), "
                f"got {images.shape}"
            )
        return self.net_.forward(images)

    def predict(self, images) -> np.ndarray:
        return np.argmax(self.predict_proba(images), axis=-1)

    def diagnose(self, image) -> Diagnosis:
        """Full diagnosis for one preprocessed (3, S, S) image."""
        probs = self.predict_proba(np.asarray(image)[None, ...])[0]
        predicted = DiseaseClass(int(np.argmax(probs)))
        return Diagnosis(
            predicted_class=predicted,
            confidence_pct=float(100.0 * probs[int(predicted)]),
            species=SPECIES,
            category=PLANT_CATEGORY,
            ailment_text=ailment_text(predicted),
        )

    def _check_fitted(self):
        if not hasattr(self, "net_"):
            raise NotFittedError("LeafDiseaseClassifier is not fitted")


# -- persistence ---------------------------------------------------------

def save_disease_model(model: LeafDiseaseClassifier, directory, name: str = "disease") -> Path:
    model._check_fitted()
    directory = Path(directory)
    manifest = model.net_.save(directory, name)
    sidecar = {
        "format_version": SIDECAR_FORMAT_VERSION,
        "input_size": model.input_size,
        "class_names": list(CLASS_NAMES),
    }
    (directory / f"{name}.meta.json").write_text(
        json.dumps(sidecar, indent=2) + "\n", encoding="utf-8")
    return manifest


def load_disease_model(directory, name: str = "disease") -> LeafDiseaseClassifier:
    directory = Path(directory)
    sidecar = json.loads((directory / f"{name}.meta.json").read_text(encoding="utf-8"))
    if sidecar.get("format_version") != SIDECAR_FORMAT_VERSION:
        raise ValueError(f"unsupported disease model format: {sidecar.get('format_version')}")
    if tuple(sidecar["class_names"]) != CLASS_NAMES:
        raise ValueError(f"unexpected class names {sidecar['class_names']}")
    model = LeafDiseaseClassifier(input_size=int(sidecar["input_size"]))
    model.net_ = Network.load(directory / f"{name}.json")
    return model
