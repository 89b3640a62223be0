"""Sensor-driven yield prediction.

A small dense network maps (temperature, humidity, pressure) to expected
yield percent. The output head is sigmoid scaled by 100, so predictions
land in [0, 100] structurally rather than by clamping. Predicted yield
below 50 marks a Negative impact; 50 or above is Positive.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.exceptions import NotFittedError

from .datasets import NEGATIVE, POSITIVE, SensorSample, sensor_features, sensor_targets
from .nn import Adam, Dense, Network, Relu, sigmoid
from .nn.train import EpochRecord, TrainingHistory
from .validation import check_in_range

IMPACT_THRESHOLD_PCT = 50.0
FEATURE_ORDER = ("temperature_c", "humidity_pct", "pressure_mbar")
SIDECAR_FORMAT_VERSION = 1


def impact_from_yield(yield_pct: float) -> str:
    """Negative below the 50% expectancy threshold, Positive at or above it."""
    yield_pct = check_in_range(yield_pct, "yield_pct", low=0, high=100)
    return NEGATIVE if yield_pct < IMPACT_THRESHOLD_PCT else POSITIVE


@dataclass(frozen=True)
class SensorReading:
    temperature_c: float
    humidity_pct: float
    pressure_mbar: float

    def __post_init__(self):
        check_in_range(self.temperature_c, "temperature_c")
        check_in_range(self.humidity_pct, "humidity_pct", low=0, high=100)
        check_in_range(self.pressure_mbar, "pressure_mbar", low=0, low_open=True)

    def as_array(self) -> np.ndarray:
        return np.array([self.temperature_c, self.humidity_pct, self.pressure_mbar])


@dataclass(frozen=True)
class YieldPrediction:
    expected_yield_pct: float
    impact: str

    @classmethod
    def from_yield(cls, yield_pct: float) -> "YieldPrediction":
        return cls(float(yield_pct), impact_from_yield(yield_pct))


class SensorYieldRegressor(RegressorMixin, BaseEstimator):
    """Dense net (3 -> hidden -> 1, sigmoid x 100) over standardized inputs.

    Per-epoch history records the training RMSE in yield points as ``loss``
    and the fraction of rows whose thresholded impact matches the targets'
    as ``accuracy``.
    """

    def __init__(self, hidden_sizes: tuple[int, ...] = (16, 8), epochs: int = 2000,
                 batch_size: int = 32, learning_rate: float = 0.01, seed: int = 0):
        self.hidden_sizes = hidden_sizes
        self.epochs = epochs
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.seed = seed

    def fit(self, X, y):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != 3:
            raise ValueError(f"X must have shape (n, 3), got {X.shape}")
        if X.shape[0] < 2:
            raise ValueError("need at least 2 training samples")
        if y.shape != (X.shape[0],):
            raise ValueError(f"{y.shape} targets for {X.shape[0]} rows")
        if np.any(y < 0) or np.any(y > 100):
            raise ValueError("targets must be percentages in [0, 100]")

        self.feature_means_ = X.mean(axis=0)
        scales = X.std(axis=0)
        if np.any(scales == 0):
            constant = [FEATURE_ORDER[i] for i in np.flatnonzero(scales == 0)]
            warnings.warn(f"constant feature column(s) {constant}; using unit scale")
            scales = np.where(scales == 0, 1.0, scales)
        self.feature_scales_ = scales

        rng = np.random.default_rng(self.seed)
        sizes = (3,) + tuple(self.hidden_sizes) + (1,)
        layers = []
        for i in range(len(sizes) - 1):
            layers.append(Dense(sizes[i], sizes[i + 1], rng))
            if i < len(sizes) - 2:
                layers.append(Relu())
        self.net_ = Network(layers, seed=self.seed)

        Xn = (X - self.feature_means_) / self.feature_scales_
        t = y / 100.0
        true_impacts = y >= IMPACT_THRESHOLD_PCT
        optimizer = Adam(self.net_.parameters(), learning_rate=self.learning_rate)
        n = X.shape[0]
        self.history_ = TrainingHistory()
        for epoch in range(1, self.epochs + 1):
            order = rng.permutation(n)
            for start in range(0, n, self.batch_size):
                batch = order[start:start + self.batch_size]
                z = self.net_.forward(Xn[batch])
                p = sigmoid(z[:, 0])
                # d(mean squared error)/d(logit) through the sigmoid head
                grad = 2.0 * (p - t[batch]) * p * (1.0 - p) / len(batch)
                self.net_.backward_from(grad[:, None])
                optimizer.step(self.net_.gradients())
            predicted = self._predict_normalized(Xn)
            record = EpochRecord(
                epoch,
                loss=float(np.sqrt(np.mean((predicted - y) ** 2))),
                accuracy=float(np.mean((predicted >= IMPACT_THRESHOLD_PCT) == true_impacts)),
            )
            self.history_.records.append(record)
        self.training_rmse_ = self.history_.final.loss
        return self

    def fit_samples(self, samples: Sequence[SensorSample]):
        return self.fit(sensor_features(samples), sensor_targets(samples))

    def _predict_normalized(self, Xn: np.ndarray) -> np.ndarray:
        return 100.0 * sigmoid(self.net_.forward(Xn)[:, 0])

    def predict(self, X) -> np.ndarray:
        self._check_fitted()
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != 3:
            raise ValueError(f"X must have shape (n, 3), got {X.shape}")
        Xn = (X - self.feature_means_) / self.feature_scales_
        return self._predict_normalized(Xn)

    def predict_reading(self, reading: SensorReading) -> YieldPrediction:
        yield_pct = float(self.predict(reading.as_array()[None, :])[0])
        return YieldPrediction.from_yield(yield_pct)

    def _check_fitted(self):
        if not hasattr(self, "net_"):
            raise NotFittedError("SensorYieldRegressor is not fitted")

    def normalize(self, X) -> np.ndarray:
        self._check_fitted()
        return (np.asarray(X, dtype=np.float64) - self.feature_means_) / self.feature_scales_

    def denormalize(self, Xn) -> np.ndarray:
        self._check_fitted()
        return np.asarray(Xn, dtype=np.float64) * self.feature_scales_ + self.feature_means_


@dataclass(frozen=True)
class GridAxis:
    start: float
    stop: float
    count: int

    def values(self) -> np.ndarray:
        if self.count < 1:
            raise ValueError(f"grid axis needs at least 1 point, got {self.count}")
        if self.count == 1:
            return np.array([float(self.start)])
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class ConditionGrid:
    temperature: GridAxis
    humidity: GridAxis
    pressure: GridAxis

    def size(self) -> int:
        return self.temperature.count * self.humidity.count * self.pressure.count


MAX_GRID_POINTS = 1_000_000


def best_conditions(model, grid: ConditionGrid) -> tuple[SensorReading, float]:
    """Grid point maximizing predicted yield.

    Ties break toward the lowest (temperature, humidity, pressure) triple;
    the grid is enumerated in that lexicographic order, so the first
    maximum wins.
    """
    size = grid.size()
    if size > MAX_GRID_POINTS:
        raise ValueError(f"grid has {size} points; limit is {MAX_GRID_POINTS}")
    t, h, p = (grid.temperature.values(), grid.humidity.values(),
               grid.pressure.values())
    mesh = np.meshgrid(t, h, p, indexing="ij")
    points = np.stack([m.reshape(-1) for m in mesh], axis=1)
    predicted = np.asarray(model.predict(points))
    best = int(np.argmax(predicted))
    reading = SensorReading(*points[best])
    return reading, float(predicted[best])


# -- persistence ---------------------------------------------------------

def save_yield_model(model: SensorYieldRegressor, directory, name: str = "yield") -> Path:
    model._check_fitted()
    directory = Path(directory)
    manifest = model.net_.save(directory, name)
    sidecar = {
        "format_version": SIDECAR_FORMAT_VERSION,
        "feature_order": list(FEATURE_ORDER),
        "feature_means": [float(v) for v in model.feature_means_],
        "feature_scales": [float(v) for v in model.feature_scales_],
    }
    (directory / f"{name}.meta.json").write_text(
        json.dumps(sidecar, indent=2) + "\n", encoding="utf-8")
    return manifest


def load_yield_model(directory, name: str = "yield") -> SensorYieldRegressor:
    directory = Path(directory)
    sidecar = json.loads((directory / f"{name}.meta.json").read_text(encoding="utf-8"))
    if sidecar.get("format_version") != SIDECAR_FORMAT_VERSION:
        raise ValueError(f"unsupported yield model format: {sidecar.get('format_version')}")
    if tuple(sidecar["feature_order"]) != FEATURE_ORDER:
        raise ValueError(f"unexpected feature order {sidecar['feature_order']}")
    model = SensorYieldRegressor()
    model.net_ = Network.load(directory / f"{name}.json")
    model.feature_means_ = np.array(sidecar["feature_means"], dtype=np.float64)
    model.feature_scales_ = np.array(sidecar["feature_scales"], dtype=np.float64)
    return model
