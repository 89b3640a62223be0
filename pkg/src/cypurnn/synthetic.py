"""Seeded synthetic rice-leaf images for the disease pipeline.

Real labelled leaf photographs are not distributed with this project, so
training and tests run on a documented stand-in: every image is a noisy
green leaf background plus a class-specific motif.

    class 0 (Healthy)   - clean leaf, veins and pixel noise only
    class 1 (Hispa)     - many small near-black feeding marks (radius 1.5-2.5 px)
    class 2 (LeafBlast) - a few long diagonal gray-brown lesions
    class 3 (BrownSpot) - medium brown discs with a darker rim

Images are RGB float64 in [0, 1] with layout (3, size, size). Generation
is fully determined by (class, rng state, size).
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .disease import CLASS_NAMES, DiseaseClass, preprocess_image


def _leaf_background(rng: np.random.Generator, size: int) -> np.ndarray:
    r = rng.uniform(0.12, 0.22)
    g = rng.uniform(0.42, 0.55)
    b = rng.uniform(0.05, 0.15)
    img = np.empty((3, size, size))
    img[0], img[1], img[2] = r, g, b
    # vertical vein striping plus pixel noise
    phase = rng.uniform(0, 2 * np.pi)
    stripes = 0.03 * np.sin(np.arange(size) * (2 * np.pi / rng.uniform(6, 12)) + phase)
    img[1] += stripes[None, :]
    img += rng.normal(0.0, 0.02, size=img.shape)
    return img


def _paint_disc(img, cy, cx, radius, color, rim_color=None):
    size = img.shape[1]
    yy, xx = np.ogrid[:size, :size]
    dist2 = (yy - cy) ** 2 + (xx - cx) ** 2
    if rim_color is not None:
        rim = dist2 <= (radius + 1.5) ** 2
        for c in range(3):
            img[c][rim] = rim_color[c]
    core = dist2 <= radius ** 2
    for c in range(3):
        img[c][core] = color[c]


def _paint_streak(img, rng):
    size = img.shape[1]
    margin = max(3.0, 0.15 * size)
    cy, cx = rng.uniform(margin, size - margin, size=2)
    angle = rng.uniform(0.3, 1.2) * rng.choice([-1.0, 1.0])
    length = rng.uniform(0.125, 0.25) * size
    width = max(1.0, rng.uniform(1.2, 2.5) * size / 64.0)
    yy, xx = np.ogrid[:size, :size]
    u = (yy - cy) * np.cos(angle) + (xx - cx) * np.sin(angle)
    v = -(yy - cy) * np.sin(angle) + (xx - cx) * np.cos(angle)
    body = (u / length) ** 2 + (v / width) ** 2 <= 1.0
    center = (u / (0.6 * length)) ** 2 + (v / (0.5 * width)) ** 2 <= 1.0
    for c, value in enumerate((0.35, 0.28, 0.18)):
        img[c][body] = value
    for c, value in enumerate((0.58, 0.52, 0.40)):
        img[c][center] = value


def _count_range(rng, low64: int, high64: int, size: int) -> int:
    # motif counts scale with image side so small test images stay sparse
    low = max(2, int(low64 * size / 64))
    high = max(low + 1, int(high64 * size / 64) + 1)
    return int(rng.integers(low, high))


def generate_leaf_image(disease: DiseaseClass, rng: np.random.Generator,
                        size: int = 64) -> np.ndarray:
    img = _leaf_background(rng, size)
    if disease == DiseaseClass.HISPA:
        for _ in range(_count_range(rng, 12, 20, size)):
            cy, cx = rng.uniform(3, max(4, size - 3), size=2)
            _paint_disc(img, cy, cx, rng.uniform(1.5, 2.5), (0.18, 0.14, 0.08))
    elif disease == DiseaseClass.LEAF_BLAST:
        for _ in range(int(rng.integers(2, 5))):
            _paint_streak(img, rng)
    elif disease == DiseaseClass.BROWN_SPOT:
        margin = min(6.0, size / 3.0)
        for _ in range(_count_range(rng, 4, 8, size)):
            cy, cx = rng.uniform(margin, size - margin, size=2)
            _paint_disc(img, cy, cx, max(2.8, rng.uniform(3.0, 5.5) * size / 64.0),
                        (0.50, 0.30, 0.10), rim_color=(0.30, 0.17, 0.05))
    return np.clip(img, 0.0, 1.0)


def generate_leaf_dataset(per_class: int, size: int = 64, seed: int = 0
                          ) -> tuple[np.ndarray, np.ndarray]:
    """(n, 3, size, size) images and their labels, class by class."""
    rng = np.random.default_rng(seed)
    images, labels = [], []
    for disease in DiseaseClass:
        for _ in range(per_class):
            images.append(generate_leaf_image(disease, rng, size))
            labels.append(int(disease))
    return np.stack(images), np.array(labels)


def write_leaf_dataset(directory, per_class: int, size: int = 64, seed: int = 0) -> int:
    """Write the dataset as PNGs under <directory>/<ClassName>/; returns count."""
    from PIL import Image

    directory = Path(directory)
    images, labels = generate_leaf_dataset(per_class, size, seed)
    for i, (img, label) in enumerate(zip(images, labels)):
        class_dir = directory / CLASS_NAMES[label]
        class_dir.mkdir(parents=True, exist_ok=True)
        pixels = (img.transpose(1, 2, 0) * 255.0).round().astype(np.uint8)
        Image.fromarray(pixels, mode="RGB").save(class_dir / f"leaf_{i:04d}.png")
    return len(images)


def load_leaf_dataset(directory, input_size: int = 64) -> tuple[np.ndarray, np.ndarray]:
    """Load a <directory>/<ClassName>/*.png|jpg tree into preprocessed tensors."""
    from PIL import Image

    directory = Path(directory)
    images, labels = [], []
    for disease in DiseaseClass:
        class_dir = directory / CLASS_NAMES[int(disease)]
        if not class_dir.is_dir():
            continue
        for path in sorted(class_dir.iterdir()):
            if path.suffix.lower() not in (".png", ".jpg", ".jpeg"):
                continue
            raw = np.asarray(Image.open(path).convert("RGB"))
            images.append(preprocess_image(raw, input_size))
            labels.append(int(disease))
    if not images:
        raise ValueError(f"no class subdirectories with images under {directory}")
    return np.stack(images), np.array(labels)
