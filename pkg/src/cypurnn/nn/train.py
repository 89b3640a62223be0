"""Seeded training loop for softmax classifiers and its epoch history."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .adam import Adam
from .network import Network
from .ops import accuracy, batch_cross_entropy


@dataclass
class TrainConfig:
    epochs: int = 180
    batch_size: int = 16
    learning_rate: float = 0.001
    seed: int = 0
    loss: str = "categorical_cross_entropy"

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate must be > 0, got {self.learning_rate}")


@dataclass
class EpochRecord:
    epoch: int
    loss: float
    accuracy: float
    val_loss: Optional[float] = None
    val_accuracy: Optional[float] = None


@dataclass
class TrainingHistory:
    records: list[EpochRecord] = field(default_factory=list)

    def __len__(self):
        return len(self.records)

    @property
    def final(self) -> EpochRecord:
        return self.records[-1]

    def losses(self) -> list[float]:
        return [r.loss for r in self.records]

    def accuracies(self) -> list[float]:
        return [r.accuracy for r in self.records]

    def to_csv(self, path) -> None:
        with Path(path).open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["epoch", "loss", "accuracy"])
            for r in self.records:
                writer.writerow([r.epoch, repr(r.loss), repr(r.accuracy)])

    @classmethod
    def from_csv(cls, path) -> "TrainingHistory":
        with Path(path).open(newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
        if not rows or rows[0] != ["epoch", "loss", "accuracy"]:
            raise ValueError(f"{path}: expected header epoch,loss,accuracy")
        return cls([EpochRecord(int(r[0]), float(r[1]), float(r[2]))
                    for r in rows[1:] if r])


def evaluate_classifier(net: Network, inputs, labels) -> tuple[float, float]:
    probs = net.forward(inputs)
    loss = batch_cross_entropy(probs, labels)
    return loss, accuracy(np.argmax(probs, axis=-1), labels)


def train_classifier(net: Network, inputs, labels, config: TrainConfig,
                     val_inputs=None, val_labels=None) -> TrainingHistory:
    """Adam + mean cross-entropy over shuffled mini-batches.

    Epoch metrics are computed on the full training set after the epoch's
    updates. Fully reproducible for a fixed seed; the last partial batch
    is kept.
    """
    inputs = np.asarray(inputs, dtype=np.float64)
    labels = np.asarray(labels)
    if inputs.shape[0] == 0:
        raise ValueError("training set is empty")
    if labels.shape != (inputs.shape[0],):
        raise ValueError(f"{labels.shape} labels for {inputs.shape[0]} inputs")
    n_classes = net.forward(inputs[:1]).shape[1]
    if np.any(labels < 0) or np.any(labels >= n_classes):
        raise ValueError(f"labels must lie in [0, {n_classes})")

    rng = np.random.default_rng(config.seed)
    optimizer = Adam(net.parameters(), learning_rate=config.learning_rate)
    n = inputs.shape[0]
    history = TrainingHistory()
    for epoch in range(1, config.epochs + 1):
        order = rng.permutation(n)
        for start in range(0, n, config.batch_size):
            batch = order[start:start + config.batch_size]
            net.forward(inputs[batch])
            net.backward(labels[batch])
            optimizer.step(net.gradients())
        loss, acc = evaluate_classifier(net, inputs, labels)
        record = EpochRecord(epoch, loss, acc)
        if val_inputs is not None:
            record.val_loss, record.val_accuracy = evaluate_classifier(
                net, val_inputs, val_labels)
        history.records.append(record)
    return history
