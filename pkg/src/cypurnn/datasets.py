"""Dataset records, CSV ingestion, and the bundled sensor-trial fixtures.

Two distinct label sets live here on purpose: the regression model knows
five states (``CROP_STATES``) while the sensor trials cover six partially
overlapping ones (``SENSOR_STATES``). They feed different models and are
never merged.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence, TypeVar

import numpy as np

from .validation import check_in_range, check_label, check_real

CROP_STATES = ("Andhra Pradesh", "Karnataka", "Kerala", "Pondicherry", "Tamil Nadu")
SEASONS = ("Autumn", "Kharif", "Rabi", "Summer", "Winter")
SENSOR_STATES = ("Punjab", "Tamil Nadu", "West Bengal", "Andhra Pradesh", "Bihar", "Karnataka")

POSITIVE = "Positive"
NEGATIVE = "Negative"
IMPACT_LABELS = (POSITIVE, NEGATIVE)

T = TypeVar("T")


@dataclass(frozen=True)
class CropRecord:
    """One (area, state, season[, yield]) observation for the regression model."""

    area: float
    state: str
    season: str
    yield_value: Optional[float] = None

    def __post_init__(self):
        check_in_range(self.area, "area", low=0)
        check_label(self.state, "state", CROP_STATES)
        check_label(self.season, "season", SEASONS)
        if self.yield_value is not None:
            check_real(self.yield_value, "yield")


@dataclass(frozen=True)
class SensorSample:
    """One controlled-conditions sensor trial row."""

    state: str
    sample_id: str
    area_sq_m: float
    temperature_c: float
    humidity_pct: float
    pressure_mbar: float
    impact: str
    expected_yield_pct: float

    def __post_init__(self):
        check_in_range(self.area_sq_m, "area_sq_m", low=0)
        check_real(self.temperature_c, "temperature_c")
        check_in_range(self.humidity_pct, "humidity_pct", low=0, high=100)
        check_in_range(self.pressure_mbar, "pressure_mbar", low=0, low_open=True)
        check_label(self.impact, "impact", IMPACT_LABELS)
        check_in_range(self.expected_yield_pct, "expected_yield_pct", low=0, high=100)


@dataclass(frozen=True)
class StateProfile:
    """Per-state soil pH metadata recorded alongside the sensor trials."""

    state: str
    soil_ph: float

    def __post_init__(self):
        check_in_range(self.soil_ph, "soil_ph", low=0, high=14,
                       low_open=True, high_open=True)


CROP_HEADER = ["area", "state", "season", "yield"]
SENSOR_HEADER = ["state", "sample_id", "area_sq_m", "temperature_c",
                 "humidity_pct", "pressure_mbar", "impact", "expected_yield_pct"]
PROFILE_HEADER = ["state", "soil_ph"]


def _open_rows(path, expected_header):
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"dataset file not found: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != expected_header:
        raise ValueError(
            f"{path}: expected header {','.join(expected_header)!r}"
        )
    # (line number, cells); header is file line 1
    return [(i + 2, row) for i, row in enumerate(rows[1:]) if row]


def _parse_float(cell: str, name: str, lineno: int) -> float:
    try:
        return float(cell)
    except ValueError:
        raise ValueError(f"malformed {name} {cell!r} at line {lineno}") from None


def load_crop_records(path) -> list[CropRecord]:
    """Load `area,state,season,yield` rows; the yield cell may be blank."""
    records = []
    for lineno, row in _open_rows(path, CROP_HEADER):
        if len(row) != 4:
            raise ValueError(f"malformed row ({len(row)} cells) at line {lineno}")
        area = _parse_float(row[0], "area", lineno)
        if area < 0:
            raise ValueError(f"negative area {area} at line {lineno}")
        state, season = row[1].strip(), row[2].strip()
        if state not in CROP_STATES:
            raise ValueError(f"unknown state {state!r} at line {lineno}")
        if season not in SEASONS:
            raise ValueError(f"unknown season {season!r} at line {lineno}")
        yield_cell = row[3].strip()
        yield_value = _parse_float(yield_cell, "yield", lineno) if yield_cell else None
        records.append(CropRecord(area, state, season, yield_value))
    return records


def load_sensor_samples(path) -> list[SensorSample]:
    samples = []
    for lineno, row in _open_rows(path, SENSOR_HEADER):
        if len(row) != 8:
            raise ValueError(f"malformed row ({len(row)} cells) at line {lineno}")
        state, sample_id = row[0].strip(), row[1].strip()
        impact = row[6].strip()
        if impact not in IMPACT_LABELS:
            raise ValueError(f"unknown impact {impact!r} at line {lineno}")
        try:
            samples.append(SensorSample(
                state=state,
                sample_id=sample_id,
                area_sq_m=_parse_float(row[2], "area_sq_m", lineno),
                temperature_c=_parse_float(row[3], "temperature_c", lineno),
                humidity_pct=_parse_float(row[4], "humidity_pct", lineno),
                pressure_mbar=_parse_float(row[5], "pressure_mbar", lineno),
                impact=impact,
                expected_yield_pct=_parse_float(row[7], "expected_yield_pct", lineno),
            ))
        except ValueError as exc:
            raise ValueError(f"{exc} at line {lineno}") from None
    return samples


def save_sensor_samples(samples: Sequence[SensorSample], path) -> None:
    """Write samples back out in the same CSV layout the loader reads."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SENSOR_HEADER)
        for s in samples:
            writer.writerow([
                s.state, s.sample_id,
                _fmt(s.area_sq_m), _fmt(s.temperature_c), _fmt(s.humidity_pct),
                _fmt(s.pressure_mbar), s.impact, _fmt(s.expected_yield_pct),
            ])


def _fmt(value: float) -> str:
    # integers print without a trailing ".0" so fixtures stay readable
    return str(int(value)) if float(value).is_integer() else repr(float(value))


def load_state_profiles(path) -> list[StateProfile]:
    profiles = []
    for lineno, row in _open_rows(path, PROFILE_HEADER):
        if len(row) != 2:
            raise ValueError(f"malformed row ({len(row)} cells) at line {lineno}")
        profiles.append(StateProfile(row[0].strip(), _parse_float(row[1], "soil_ph", lineno)))
    return profiles


def train_test_split(items: Sequence[T], test_fraction: float, seed: int
                     ) -> tuple[list[T], list[T]]:
    """Deterministic disjoint split with |test| = round(n * test_fraction)."""
    if not 0 < test_fraction < 1:
        raise ValueError(f"test_fraction must be in (0, 1), got {test_fraction}")
    n = len(items)
    if n == 0:
        raise ValueError("cannot split an empty dataset")
    n_test = int(round(n * test_fraction))
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    test_idx = set(perm[:n_test].tolist())
    train = [items[i] for i in range(n) if i not in test_idx]
    test = [items[i] for i in range(n) if i in test_idx]
    return train, test


def fixture_path(name: str) -> Path:
    """Path to a CSV bundled with the package (also mirrored in fixtures/)."""
    return Path(str(resources.files("cypurnn") / "fixtures" / name))


def load_table1_samples() -> list[SensorSample]:
    """The 30 bundled sensor-trial rows."""
    return load_sensor_samples(fixture_path("table1_sensor_samples.csv"))


def load_state_profile_fixture() -> list[StateProfile]:
    return load_state_profiles(fixture_path("state_profiles.csv"))


def sensor_features(samples: Sequence[SensorSample]) -> np.ndarray:
    """(n, 3) matrix of [temperature_c, humidity_pct, pressure_mbar]."""
    return np.array([[s.temperature_c, s.humidity_pct, s.pressure_mbar]
                     for s in samples], dtype=np.float64)


def sensor_targets(samples: Sequence[SensorSample]) -> np.ndarray:
    return np.array([s.expected_yield_pct for s in samples], dtype=np.float64)
