"""One-hot feature encoding for crop records.

The column layout is fixed: area first, then the five state indicators,
then the five season indicators (eleven columns total). The ordering is
written into every persisted model so predictions never depend on it
implicitly.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .datasets import CROP_STATES, SEASONS, CropRecord

FEATURE_NAMES: tuple[str, ...] = ("Area",) + CROP_STATES + SEASONS
N_FEATURES = len(FEATURE_NAMES)  # 11


def encode_record(record: CropRecord) -> np.ndarray:
    """[area, onehot(state), onehot(season)] under the fixed column order."""
    row = np.zeros(N_FEATURES, dtype=np.float64)
    row[0] = record.area
    row[1 + CROP_STATES.index(record.state)] = 1.0
    row[1 + len(CROP_STATES) + SEASONS.index(record.season)] = 1.0
    return row


def encode_records(records: Sequence[CropRecord]) -> np.ndarray:
    """Stack encoded rows into an (n, 11) design matrix."""
    if len(records) == 0:
        return np.zeros((0, N_FEATURES), dtype=np.float64)
    return np.stack([encode_record(r) for r in records])


def design_matrix(records: Sequence[CropRecord]
                  ) -> tuple[np.ndarray, Optional[np.ndarray]]:
    """Encoded matrix plus the target vector when every record carries one."""
    X = encode_records(records)
    if records and all(r.yield_value is not None for r in records):
        y = np.array([r.yield_value for r in records], dtype=np.float64)
        return X, y
    return X, None


class CropFeatureEncoder(BaseEstimator, TransformerMixin):
    """Stateless transformer exposing the fixed encoding to sklearn pipelines."""

    def fit(self, X, y=None):
        return self

    def transform(self, X: Sequence[CropRecord]) -> np.ndarray:
        return encode_records(X)

    def get_feature_names_out(self, input_features=None):
        return np.asarray(FEATURE_NAMES, dtype=object)
