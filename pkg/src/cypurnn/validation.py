"""Small input-validation helpers shared across estimators and loaders."""

from __future__ import annotations

import numbers

import numpy as np


def check_real(value, name: str) -> float:
    """Coerce `value` to float, rejecting non-numeric and non-finite input."""
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise ValueError(f"{name} must be a real number, got {value!r}")
    value = float(value)
    if not np.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


def check_in_range(value, name: str, low=None, high=None,
                   low_open: bool = False, high_open: bool = False) -> float:
    """Validate a real number against an (optionally open) interval."""
    value = check_real(value, name)
    if low is not None:
        if low_open and value <= low:
            raise ValueError(f"{name} must be > {low}, got {value}")
        if not low_open and value < low:
            raise ValueError(f"{name} must be >= {low}, got {value}")
    if high is not None:
        if high_open and value >= high:
            raise ValueError(f"{name} must be < {high}, got {value}")
        if not high_open and value > high:
            raise ValueError(f"{name} must be <= {high}, got {value}")
    return value


def check_label(value, name: str, allowed) -> str:
    """Validate a categorical label against a closed set of values."""
    if value not in allowed:
        choices = ", ".join(allowed)
        raise ValueError(f"unknown {name} {value!r} (expected one of: {choices})")
    return value


def as_float_array(values, name: str, ndim: int | None = None,
                   allow_empty: bool = False) -> np.ndarray:
    """Convert to a float64 array and reject NaN/inf entries."""
    arr = np.asarray(values, dtype=np.float64)
    if ndim is not None and arr.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    if not allow_empty and arr.size == 0:
        raise ValueError(f"{name} must be non-empty")
    if arr.size and not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def check_same_length(a, b, name_a: str, name_b: str) -> int:
    if len(a) != len(b):
        raise ValueError(
            f"{name_a} and {name_b} must have equal lengths "
            f"({len(a)} != {len(b)})"
        )
    return len(a)
