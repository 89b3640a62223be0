"""Crop yield prediction toolkit: linear regression with published
coefficients, sensor-driven yield networks, leaf-disease classification,
and an HTTP inference service."""

from .datasets import (CROP_STATES, SEASONS, SENSOR_STATES, CropRecord,
                       SensorSample, StateProfile, load_crop_records,
                       load_sensor_samples, load_state_profiles,
                       load_table1_samples, train_test_split)
from .disease import (CLASS_NAMES, Diagnosis, DiseaseClass, LeafDiseaseClassifier,
                      ailment_text, preprocess_image)
from .encoding import FEATURE_NAMES, CropFeatureEncoder, design_matrix, encode_record
from .regression import MlrRegressor, published_model, r_squared, rmse
from .sensor_yield import (ConditionGrid, GridAxis, SensorReading,
                           SensorYieldRegressor, YieldPrediction, best_conditions,
                           impact_from_yield)

__version__ = "0.1.0"

__all__ = [
    "CLASS_NAMES", "CROP_STATES", "ConditionGrid", "CropFeatureEncoder",
    "CropRecord", "Diagnosis", "DiseaseClass", "FEATURE_NAMES", "GridAxis",
    "LeafDiseaseClassifier", "MlrRegressor", "SEASONS", "SENSOR_STATES",
    "SensorReading", "SensorSample", "SensorYieldRegressor", "StateProfile",
    "YieldPrediction", "ailment_text", "best_conditions", "design_matrix",
    "encode_record", "impact_from_yield", "load_crop_records",
    "load_sensor_samples", "load_state_profiles", "load_table1_samples",
    "published_model", "preprocess_image", "r_squared", "rmse", "train_test_split",
]
