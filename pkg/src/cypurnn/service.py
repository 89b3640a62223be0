"""HTTP inference service exposing the three models under /api/v1.

Models are trained elsewhere (CLI) and loaded read-only from a directory;
any subset may be present, and endpoints whose model is missing answer
404 MODEL_MISSING. The registry is an immutable snapshot swapped
atomically by POST /api/v1/reload, so request handlers never share
mutable state.

Error responses all use the shape ``{"code": ..., "message": ...}`` with
this closed code table:

    VALIDATION         422  bad field value or undecodable upload
    MODEL_MISSING      404  endpoint's model not loaded
    NOT_FOUND          404  unknown route (or unsupported method)
    PAYLOAD_TOO_LARGE  413  upload beyond the configured cap
    UNAUTHORIZED       400  reload secret missing or wrong
    INTERNAL           500  unexpected failure
"""

from __future__ import annotations

import io
import math
import os
import socket
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
import uvicorn
from fastapi import FastAPI, Request, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field, field_validator
from starlette.exceptions import HTTPException as StarletteHTTPException

from .datasets import CROP_STATES, SEASONS, CropRecord
from .disease import LeafDiseaseClassifier, load_disease_model, preprocess_image
from .regression import MlrRegressor
from .sensor_yield import (SensorReading, SensorYieldRegressor,
                           impact_from_yield, load_yield_model)

DEFAULT_MAX_UPLOAD = 5 * 1024 * 1024

# wire format for predictions: 12 significant digits. Full-precision doubles
# carry 1-ulp summation artifacts (1.9689999999999999) that would leak into
# every displayed number; 12 digits is far beyond sensor precision and keeps
# the documented example bodies exact.
WIRE_PRECISION = 12


def wire_float(value: float) -> float:
    return float(f"{value:.{WIRE_PRECISION}g}")

ENV_PORT = "CYPUR_PORT"
ENV_MODEL_DIR = "CYPUR_MODEL_DIR"
ENV_RELOAD_SECRET = "CYPUR_RELOAD_SECRET"
RELOAD_SECRET_HEADER = "x-reload-secret"


@dataclass
class ServiceConfig:
    model_dir: Path
    host: str = "127.0.0.1"
    port: int = 8000
    max_upload_bytes: int = DEFAULT_MAX_UPLOAD
    request_timeout_s: float = 30.0
    reload_secret: Optional[str] = None

    def __post_init__(self):
        self.model_dir = Path(self.model_dir)
        if not 1 <= self.port <= 65535:
            raise ValueError(f"port must be in [1, 65535], got {self.port}")
        if self.max_upload_bytes <= 0:
            raise ValueError(f"max_upload_bytes must be > 0, got {self.max_upload_bytes}")

    @classmethod
    def from_env(cls, model_dir=None, **overrides) -> "ServiceConfig":
        model_dir = model_dir or os.environ.get(ENV_MODEL_DIR, "models")
        if "port" not in overrides and ENV_PORT in os.environ:
            overrides["port"] = int(os.environ[ENV_PORT])
        if "reload_secret" not in overrides:
            overrides["reload_secret"] = os.environ.get(ENV_RELOAD_SECRET)
        return cls(model_dir=model_dir, **overrides)


@dataclass(frozen=True)
class ModelRegistry:
    """Read-only snapshot of whatever models the directory holds."""

    mlr: Optional[MlrRegressor] = None
    yield_model: Optional[SensorYieldRegressor] = None
    disease: Optional[LeafDiseaseClassifier] = None

    @classmethod
    def load(cls, model_dir) -> "ModelRegistry":
        model_dir = Path(model_dir)
        if not model_dir.is_dir():
            raise FileNotFoundError(f"model directory not found: {model_dir}")
        mlr = yield_model = disease = None
        if (model_dir / "mlr.json").exists():
            mlr = MlrRegressor.load(model_dir / "mlr.json")
        if (model_dir / "yield.meta.json").exists():
            yield_model = load_yield_model(model_dir)
        if (model_dir / "disease.meta.json").exists():
            disease = load_disease_model(model_dir)
        return cls(mlr=mlr, yield_model=yield_model, disease=disease)

    def available(self) -> list[str]:
        names = []
        if self.mlr is not None:
            names.append("mlr")
        if self.yield_model is not None:
            names.append("yield")
        if self.disease is not None:
            names.append("disease")
        return names


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        assert status in (400, 404, 413, 422, 500)
        self.status = status
        self.code = code
        self.message = message
        super().__init__(message)

    def response(self) -> JSONResponse:
        return JSONResponse(status_code=self.status,
                            content={"code": self.code, "message": self.message})


class YieldRequest(BaseModel):
    area: float = Field(ge=0, allow_inf_nan=False)
    state: str
    season: str

    @field_validator("state")
    @classmethod
    def _state_known(cls, v):
        if v not in CROP_STATES:
            raise ValueError(f"must be one of: {', '.join(CROP_STATES)}")
        return v

    @field_validator("season")
    @classmethod
    def _season_known(cls, v):
        if v not in SEASONS:
            raise ValueError(f"must be one of: {', '.join(SEASONS)}")
        return v


class ImpactRequest(BaseModel):
    temperature_c: float = Field(allow_inf_nan=False)
    humidity_pct: float = Field(ge=0, le=100, allow_inf_nan=False)
    pressure_mbar: float = Field(gt=0, allow_inf_nan=False)


def create_app(config: ServiceConfig, registry: Optional[ModelRegistry] = None) -> FastAPI:
    app = FastAPI(title="crop yield inference service", version="1")
    app.state.config = config
    app.state.registry = registry if registry is not None \
        else ModelRegistry.load(config.model_dir)
    # the browser UI may be served from a different origin; the API is
    # unauthenticated and read-only, so a permissive policy is fine
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        loc = [str(part) for part in first.get("loc", ()) if part != "body"]
        fld = ".".join(loc) or "body"
        return ApiError(422, "VALIDATION",
                        f"invalid field '{fld}': {first.get('msg', 'invalid value')}").response()

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError):
        return exc.response()

    @app.exception_handler(StarletteHTTPException)
    async def _http_error(request: Request, exc: StarletteHTTPException):
        status = exc.status_code if exc.status_code in (400, 404, 413, 422, 500) else 404
        code = {400: "VALIDATION", 404: "NOT_FOUND", 413: "PAYLOAD_TOO_LARGE",
                422: "VALIDATION", 500: "INTERNAL"}[status]
        return ApiError(status, code, str(exc.detail)).response()

    @app.exception_handler(Exception)
    async def _internal_error(request: Request, exc: Exception):
        return ApiError(500, "INTERNAL", f"{type(exc).__name__}: {exc}").response()

    def _require(model, name: str):
        if model is None:
            raise ApiError(404, "MODEL_MISSING", f"model '{name}' is not loaded")
        return model

    @app.get("/api/v1/health")
    def health():
        return {"status": "ok", "models": app.state.registry.available()}

    @app.post("/api/v1/predict/yield")
    def predict_yield(body: YieldRequest):
        model = _require(app.state.registry.mlr, "mlr")
        record = CropRecord(area=body.area, state=body.state, season=body.season)
        return {"predicted_yield": wire_float(model.predict_record(record)),
                "model_version": model.version_}

    @app.post("/api/v1/predict/impact")
    def predict_impact(body: ImpactRequest):
        model = _require(app.state.registry.yield_model, "yield")
        reading = SensorReading(body.temperature_c, body.humidity_pct, body.pressure_mbar)
        prediction = model.predict_reading(reading)
        # threshold the wire value so the response invariant
        # (impact == Negative iff serialized yield < 50) is exact
        yield_pct = wire_float(prediction.expected_yield_pct)
        return {"expected_yield_pct": yield_pct,
                "impact": impact_from_yield(yield_pct)}

    @app.post("/api/v1/classify/leaf")
    async def classify_leaf(image: UploadFile):
        model = _require(app.state.registry.disease, "disease")
        data = await image.read(config.max_upload_bytes + 1)
        if len(data) > config.max_upload_bytes:
            raise ApiError(413, "PAYLOAD_TOO_LARGE",
                           f"upload exceeds {config.max_upload_bytes} bytes")
        try:
            from PIL import Image
            decoded = np.asarray(Image.open(io.BytesIO(data)).convert("RGB"))
        except Exception:
            raise ApiError(422, "VALIDATION", "could not decode image (PNG or JPEG expected)")
        diagnosis = model.diagnose(preprocess_image(decoded, model.input_size))
        return {
            "class": diagnosis.predicted_class.label,
            "confidence_pct": wire_float(diagnosis.confidence_pct),
            "species": diagnosis.species,
            "category": diagnosis.category,
            "ailment": diagnosis.ailment_text,
        }

    @app.post("/api/v1/reload")
    def reload_models(request: Request):
        secret = request.headers.get(RELOAD_SECRET_HEADER)
        if not config.reload_secret or secret != config.reload_secret:
            raise ApiError(400, "UNAUTHORIZED", "missing or invalid reload secret")
        app.state.registry = ModelRegistry.load(config.model_dir)
        return {"status": "ok", "models": app.state.registry.available()}

    return app


class ServiceHandle:
    """A service running on a background thread; used by tests and tools."""

    def __init__(self, server: uvicorn.Server, thread: threading.Thread, port: int):
        self._server = server
        self._thread = thread
        self.port = port

    @property
    def base_url(self) -> str:
        return f"http://127.0.0.1:{self.port}"

    def stop(self, timeout: float = 10.0) -> None:
        self._server.should_exit = True
        self._thread.join(timeout)


def serve(config: ServiceConfig, registry: Optional[ModelRegistry] = None) -> ServiceHandle:
    """Start the service on a daemon thread and return a handle to it."""
    app = create_app(config, registry)
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    sock.bind((config.host, config.port))  # raises if the port is taken
    port = sock.getsockname()[1]
    server = uvicorn.Server(uvicorn.Config(
        app, log_level="warning",
        timeout_keep_alive=int(math.ceil(config.request_timeout_s)),
    ))
    thread = threading.Thread(target=server.run, kwargs={"sockets": [sock]}, daemon=True)
    thread.start()
    while not server.started and thread.is_alive():
        pass
    if not thread.is_alive():
        raise RuntimeError("service failed to start")
    return ServiceHandle(server, thread, port)


def run_server(config: ServiceConfig, registry: Optional[ModelRegistry] = None) -> None:
    """Run the service in the current thread (graceful SIGINT/SIGTERM)."""
    app = create_app(config, registry)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info",
                timeout_keep_alive=int(math.ceil(config.request_timeout_s)))
