"""Multiple linear regression for crop yield.

Fitting minimizes ``sum((y - yhat)^2) + ridge_lambda * ||coef||^2`` with the
intercept left unpenalized. With ``ridge_lambda == 0`` and a rank-deficient
design (the all-dummies-plus-intercept layout is one), the minimum-norm
least-squares solution is returned, so correctness is best stated on
predictions rather than raw coefficients.

A constant model with the published coefficient table ships as
:func:`published_model` (version ``paper-mlr-v1``); the original survey data is
not available to re-fit.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.exceptions import NotFittedError

from .datasets import CropRecord
from .encoding import FEATURE_NAMES, encode_record
from .validation import as_float_array, check_same_length

PUBLISHED_MODEL_VERSION = "paper-mlr-v1"
PUBLISHED_INTERCEPT = 0.874
PUBLISHED_COEFFICIENTS = {
    "Area": 1.019,
    "Andhra Pradesh": 0.035,
    "Karnataka": -0.082,
    "Kerala": -0.309,
    "Pondicherry": 0.095,
    "Tamil Nadu": 0.260,
    "Autumn": 0.041,
    "Kharif": -0.157,
    "Rabi": -0.029,
    "Summer": 0.111,
    "Winter": 0.034,
}

MODEL_FORMAT_VERSION = 1


def rmse(predicted, actual) -> float:
    """Root mean squared error between two equal-length vectors."""
    p = as_float_array(predicted, "predicted", ndim=1)
    a = as_float_array(actual, "actual", ndim=1)
    check_same_length(p, a, "predicted", "actual")
    return float(np.sqrt(np.mean((p - a) ** 2)))


def r_squared(predicted, actual) -> float:
    """Coefficient of determination (no published target value exists for it)."""
    p = as_float_array(predicted, "predicted", ndim=1)
    a = as_float_array(actual, "actual", ndim=1)
    check_same_length(p, a, "predicted", "actual")
    ss_res = float(np.sum((a - p) ** 2))
    ss_tot = float(np.sum((a - np.mean(a)) ** 2))
    return 1.0 - ss_res / ss_tot if ss_tot > 0 else (1.0 if ss_res == 0 else 0.0)


class MlrRegressor(RegressorMixin, BaseEstimator):
    """Linear model ``y = intercept + X @ coef`` with optional ridge penalty.

    Fitted attributes: ``intercept_``, ``coef_``, ``feature_names_``,
    ``residuals_``, ``training_rmse_``, ``version_``.
    """

    def __init__(self, ridge_lambda: float = 0.0):
        self.ridge_lambda = ridge_lambda

    def fit(self, X, y, feature_names: Optional[Sequence[str]] = None):
        if self.ridge_lambda < 0:
            raise ValueError(f"ridge_lambda must be >= 0, got {self.ridge_lambda}")
        X = as_float_array(X, "X", ndim=2)
        y = as_float_array(y, "y", ndim=1)
        check_same_length(X, y, "X rows", "y")

        n, p = X.shape
        if feature_names is None:
            feature_names = FEATURE_NAMES if p == len(FEATURE_NAMES) \
                else tuple(f"x{j}" for j in range(p))
        elif len(feature_names) != p:
            raise ValueError(f"{len(feature_names)} feature names for {p} columns")

        if self.ridge_lambda == 0:
            # minimum-norm solution over [intercept, coef] via SVD
            augmented = np.hstack([np.ones((n, 1)), X])
            beta, *_ = np.linalg.lstsq(augmented, y, rcond=None)
        else:
            # bordered normal equations; positive definite for lambda > 0
            ones = np.ones(n)
            lhs = np.empty((p + 1, p + 1))
            lhs[0, 0] = n
            lhs[0, 1:] = ones @ X
            lhs[1:, 0] = lhs[0, 1:]
            lhs[1:, 1:] = X.T @ X + self.ridge_lambda * np.eye(p)
            rhs = np.concatenate([[ones @ y], X.T @ y])
            beta = np.linalg.solve(lhs, rhs)

        self.intercept_ = float(beta[0])
        self.coef_ = beta[1:].copy()
        self.feature_names_ = tuple(feature_names)
        self.version_ = "fitted-mlr"
        predictions = self.predict(X)
        self.residuals_ = y - predictions
        self.training_rmse_ = rmse(predictions, y)
        return self

    def predict(self, X) -> np.ndarray:
        self._check_fitted()
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != len(self.coef_):
            raise ValueError(
                f"X must have shape (n, {len(self.coef_)}), got {X.shape}"
            )
        return X @ self.coef_ + self.intercept_

    def predict_record(self, record: CropRecord) -> float:
        """Yield estimate for a single observation (schema-checked)."""
        self._check_fitted()
        if self.feature_names_ != FEATURE_NAMES:
            raise ValueError("model was not fitted on the crop-record schema")
        return float(encode_record(record) @ self.coef_ + self.intercept_)

    def coefficient(self, name: str) -> float:
        self._check_fitted()
        try:
            return float(self.coef_[self.feature_names_.index(name)])
        except ValueError:
            raise KeyError(f"no coefficient named {name!r}") from None

    def penalized_loss(self, X, y) -> float:
        """Training objective; used by the optimality property tests."""
        residual = as_float_array(y, "y", ndim=1) - self.predict(X)
        return float(residual @ residual + self.ridge_lambda * (self.coef_ @ self.coef_))

    def _check_fitted(self):
        if not hasattr(self, "coef_"):
            raise NotFittedError("MlrRegressor is not fitted")

    # -- persistence ---------------------------------------------------------

    def to_json(self) -> str:
        self._check_fitted()
        doc = {
            "format_version": MODEL_FORMAT_VERSION,
            "version": self.version_,
            "intercept": self.intercept_,
            "coefficients": {name: float(c)
                             for name, c in zip(self.feature_names_, self.coef_)},
            "schema": list(self.feature_names_),
        }
        # fixed key order (insertion order) keeps the document byte-stable
        return json.dumps(doc, indent=2) + "\n"

    def save(self, path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")

    @classmethod
    def from_json(cls, text: str) -> "MlrRegressor":
        doc = json.loads(text)
        if doc.get("format_version") != MODEL_FORMAT_VERSION:
            raise ValueError(f"unsupported model format: {doc.get('format_version')}")
        schema = tuple(doc["schema"])
        coeffs = doc["coefficients"]
        if set(coeffs) != set(schema):
            raise ValueError("coefficient names do not match schema")
        model = cls()
        model.intercept_ = float(doc["intercept"])
        model.coef_ = np.array([coeffs[name] for name in schema], dtype=np.float64)
        model.feature_names_ = schema
        model.version_ = doc.get("version", "fitted-mlr")
        return model

    @classmethod
    def load(cls, path) -> "MlrRegressor":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


def published_model() -> MlrRegressor:
    """The published constant model (intercept 0.874, eleven coefficients)."""
    model = MlrRegressor()
    model.intercept_ = PUBLISHED_INTERCEPT
    model.coef_ = np.array([PUBLISHED_COEFFICIENTS[name] for name in FEATURE_NAMES])
    model.feature_names_ = FEATURE_NAMES
    model.version_ = PUBLISHED_MODEL_VERSION
    return model
