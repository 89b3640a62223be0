"""Activation and loss primitives used by the layer stack."""

from __future__ import annotations

import numpy as np

# probabilities are clamped here before the log so saturated outputs
# cannot produce -inf losses
EPS_CLIP = 1e-12


def relu(x) -> np.ndarray:
    """Elementwise max(0, x); shape preserved."""
    return np.maximum(np.asarray(x, dtype=np.float64), 0.0)


def softmax(logits) -> np.ndarray:
    """Exponential normalization along the last axis, max-shifted for stability."""
    z = np.asarray(logits, dtype=np.float64)
    if z.size == 0:
        raise ValueError("softmax input must be non-empty")
    if not np.all(np.isfinite(z)):
        raise ValueError("softmax input must be finite")
    with np.errstate(over="ignore"):  # extreme spreads underflow to exp(-inf) = 0
        e = np.exp(z - z.max(axis=-1, keepdims=True))
    return e / e.sum(axis=-1, keepdims=True)


def cross_entropy(probs, target_class: int) -> float:
    """-ln(probs[target_class]) for a single probability vector."""
    p = np.asarray(probs, dtype=np.float64)
    if p.ndim != 1:
        raise ValueError(f"probs must be rank-1, got shape {p.shape}")
    if not 0 <= target_class < p.shape[0]:
        raise IndexError(f"target_class {target_class} out of range for {p.shape[0]} classes")
    return float(-np.log(max(p[target_class], EPS_CLIP)))


def batch_cross_entropy(probs: np.ndarray, targets: np.ndarray) -> float:
    """Mean -ln p[target] over a (n, k) batch of probability rows."""
    p = np.asarray(probs, dtype=np.float64)
    targets = np.asarray(targets)
    if np.any(targets < 0) or np.any(targets >= p.shape[1]):
        raise IndexError("target class out of range")
    picked = p[np.arange(p.shape[0]), targets]
    return float(-np.mean(np.log(np.maximum(picked, EPS_CLIP))))


def accuracy(predictions, truth) -> float:
    """Fraction of exact matches between two label vectors."""
    p = np.asarray(predictions)
    t = np.asarray(truth)
    if p.shape != t.shape or p.size == 0:
        raise ValueError(f"label vectors must match and be non-empty ({p.shape} vs {t.shape})")
    return float(np.mean(p == t))


def sigmoid(x) -> np.ndarray:
    z = np.asarray(x, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out
