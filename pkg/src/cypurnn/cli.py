"""Command-line entry point.

Exit codes: 0 success, 1 usage error (bad flags or invalid input values),
2 runtime failure (unreadable files, broken models). Human-readable output
goes to stdout with three decimal places; ``--json`` switches stdout to a
single machine-readable JSON document at full precision. Diagnostics go
to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .datasets import (CropRecord, load_sensor_samples, sensor_features,
                       sensor_targets)
from .disease import LeafDiseaseClassifier, load_disease_model, preprocess_image
from .nn import accuracy
from .regression import MlrRegressor, published_model, rmse
from .sensor_yield import (SensorReading, SensorYieldRegressor,
                           load_yield_model, save_yield_model)
from .service import ServiceConfig, run_server


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(args, lines: list[str], payload: dict) -> None:
    if args.json:
        print(json.dumps(payload))
    else:
        for line in lines:
            print(line)


def _load_yield(model_dir):
    try:
        return load_yield_model(model_dir)
    except FileNotFoundError:
        raise RuntimeError(f"no yield model found in {model_dir}") from None


def _load_disease(model_dir):
    try:
        return load_disease_model(model_dir)
    except FileNotFoundError:
        raise RuntimeError(f"no disease model found in {model_dir}") from None


def _decode_image(path):
    from PIL import Image

    try:
        return np.asarray(Image.open(path).convert("RGB"))
    except FileNotFoundError:
        raise RuntimeError(f"image file not found: {path}") from None
    except Exception as exc:
        raise RuntimeError(f"could not decode image {path}: {exc}") from None


# -- subcommands -----------------------------------------------------------

def cmd_predict_yield(args) -> int:
    model = MlrRegressor.load(args.model) if args.model else published_model()
    try:
        record = CropRecord(area=args.area, state=args.state, season=args.season)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    predicted = model.predict_record(record)
    _emit(args, [f"Predicted Yield is {predicted:.3f}"],
          {"predicted_yield": predicted, "model_version": model.version_})
    return 0


def cmd_train_yield(args) -> int:
    samples = load_sensor_samples(args.data)
    model = SensorYieldRegressor(epochs=args.epochs, batch_size=args.batch_size,
                                 learning_rate=args.learning_rate, seed=args.seed)
    model.fit(sensor_features(samples), sensor_targets(samples))
    out = Path(args.out)
    save_yield_model(model, out)
    model.history_.to_csv(out / "history.csv")
    _emit(args, [f"Training RMSE is {model.training_rmse_:.3f}",
                 f"Model written to {out}"],
          {"training_rmse": model.training_rmse_, "epochs": args.epochs,
           "seed": args.seed, "out": str(out)})
    return 0


def cmd_predict_impact(args) -> int:
    model = _load_yield(args.model_dir)
    try:
        reading = SensorReading(args.temperature_c, args.humidity_pct, args.pressure_mbar)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    prediction = model.predict_reading(reading)
    _emit(args, [f"Expected Yield is {prediction.expected_yield_pct:.3f}% "
                 f"({prediction.impact} impact)"],
          {"expected_yield_pct": prediction.expected_yield_pct,
           "impact": prediction.impact})
    return 0


def cmd_train_disease(args) -> int:
    from .synthetic import load_leaf_dataset

    images, labels = load_leaf_dataset(args.data, args.input_size)
    model = LeafDiseaseClassifier(input_size=args.input_size, epochs=args.epochs,
                                  batch_size=args.batch_size,
                                  learning_rate=args.learning_rate, seed=args.seed)
    model.fit(images, labels)
    out = Path(args.out)
    from .disease import save_disease_model
    save_disease_model(model, out)
    model.history_.to_csv(out / "history.csv")
    final = model.history_.final
    _emit(args, [f"Training accuracy is {final.accuracy:.3f}",
                 f"Training loss is {final.loss:.3f}",
                 f"Model written to {out}"],
          {"training_accuracy": final.accuracy, "training_loss": final.loss,
           "epochs": args.epochs, "seed": args.seed, "out": str(out)})
    return 0


def cmd_classify(args) -> int:
    model = _load_disease(args.model_dir)
    image = preprocess_image(_decode_image(args.image), model.input_size)
    diagnosis = model.diagnose(image)
    _emit(args, [f"Class: {diagnosis.predicted_class.label}",
                 f"Confidence: {diagnosis.confidence_pct:.3f}%",
                 f"Species: {diagnosis.species}",
                 f"Category: {diagnosis.category}",
                 diagnosis.ailment_text],
          {"class": diagnosis.predicted_class.label,
           "confidence_pct": diagnosis.confidence_pct,
           "species": diagnosis.species, "category": diagnosis.category,
           "ailment": diagnosis.ailment_text})
    return 0


def _detect_model_kind(model_dir: Path) -> str:
    has_yield = (model_dir / "yield.meta.json").exists()
    has_disease = (model_dir / "disease.meta.json").exists()
    if has_yield and has_disease:
        raise UsageError("model directory holds both models; pass --kind")
    if has_yield:
        return "yield"
    if has_disease:
        return "disease"
    raise RuntimeError(f"no trained model found in {model_dir}")


def cmd_eval(args) -> int:
    model_dir = Path(args.model_dir)
    kind = args.kind or _detect_model_kind(model_dir)
    if kind == "yield":
        model = _load_yield(model_dir)
        samples = load_sensor_samples(args.data)
        predicted = model.predict(sensor_features(samples))
        targets = sensor_targets(samples)
        metric_name, metric = "rmse", rmse(predicted, targets)
        impact_acc = float(np.mean((predicted >= 50) == (targets >= 50)))
        lines = [f"RMSE is {metric:.3f}",
                 f"Impact accuracy is {impact_acc:.3f}"]
        payload = {"rmse": metric, "impact_accuracy": impact_acc}
    else:
        from .synthetic import load_leaf_dataset

        model = _load_disease(model_dir)
        images, labels = load_leaf_dataset(args.data, model.input_size)
        metric_name, metric = "accuracy", accuracy(model.predict(images), labels)
        lines = [f"Accuracy is {metric:.3f}"]
        payload = {"accuracy": metric}

    history_src = model_dir / "history.csv"
    history_out = Path(args.history_out)
    if history_src.exists():
        history_out.write_text(history_src.read_text(encoding="utf-8"), encoding="utf-8")
        lines.append(f"History written to {history_out}")
        payload["history_out"] = str(history_out)
    else:
        print(f"warning: no history.csv alongside the model in {model_dir}",
              file=sys.stderr)
    payload["metric"] = metric_name
    _emit(args, lines, payload)
    return 0


def cmd_serve(args) -> int:
    overrides = {}
    if args.config:
        try:
            overrides.update(json.loads(Path(args.config).read_text(encoding="utf-8")))
        except FileNotFoundError:
            raise RuntimeError(f"config file not found: {args.config}") from None
    if args.host is not None:
        overrides["host"] = args.host
    if args.port is not None:
        overrides["port"] = args.port
    model_dir = args.model_dir or overrides.pop("model_dir", None)
    try:
        config = ServiceConfig.from_env(model_dir=model_dir, **overrides)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.init_builtin_mlr:
        config.model_dir.mkdir(parents=True, exist_ok=True)
        mlr_path = config.model_dir / "mlr.json"
        if not mlr_path.exists():
            published_model().save(mlr_path)
    if args.json:
        print(json.dumps({"host": config.host, "port": config.port,
                          "model_dir": str(config.model_dir)}))
    else:
        print(f"serving on http://{config.host}:{config.port} "
              f"(models from {config.model_dir})")
    run_server(config)
    return 0


def cmd_gen_synthetic(args) -> int:
    from .synthetic import write_leaf_dataset

    out = Path(args.out)
    n_train = write_leaf_dataset(out / "train", args.train_per_class,
                                 args.size, args.seed)
    # held-out images come from an independent stream
    n_test = write_leaf_dataset(out / "test", args.test_per_class,
                                args.size, args.seed + 1)
    _emit(args, [f"Wrote {n_train} training and {n_test} test images to {out}"],
          {"train_images": n_train, "test_images": n_test, "size": args.size,
           "seed": args.seed, "out": str(out)})
    return 0


# -- parser ----------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="cypurnn", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        p = sub.add_parser(name, help=help)
        p.set_defaults(func=func)
        p.add_argument("--json", action="store_true",
                       help="machine-readable output on stdout")
        return p

    p = add("predict-yield", cmd_predict_yield,
            "estimate crop yield from area, state, and season")
    p.add_argument("--area", type=float, required=True, help="land area in hectares")
    p.add_argument("--state", required=True)
    p.add_argument("--season", required=True)
    p.add_argument("--model", help="path to a fitted model JSON (default: built-in)")

    p = add("train-yield", cmd_train_yield, "train the sensor yield model on a CSV")
    p.add_argument("--data", required=True, help="sensor sample CSV")
    p.add_argument("--out", required=True, help="output model directory")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--epochs", type=int, default=2000)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--learning-rate", type=float, default=0.01)

    p = add("predict-impact", cmd_predict_impact,
            "predict expected yield %% and impact from sensor readings")
    p.add_argument("--temperature-c", type=float, required=True)
    p.add_argument("--humidity-pct", type=float, required=True)
    p.add_argument("--pressure-mbar", type=float, required=True)
    p.add_argument("--model-dir", default="models")

    p = add("train-disease", cmd_train_disease,
            "train the leaf disease classifier on an image directory")
    p.add_argument("--data", required=True, help="directory of <ClassName>/ images")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--epochs", type=int, default=180)
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument("--learning-rate", type=float, default=0.001)
    p.add_argument("--input-size", type=int, default=64)

    p = add("classify", cmd_classify, "diagnose a single leaf image")
    p.add_argument("--model-dir", default="models")
    p.add_argument("--image", required=True)

    p = add("eval", cmd_eval, "evaluate a trained model and export its history")
    p.add_argument("--model-dir", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--kind", choices=["yield", "disease"])
    p.add_argument("--history-out", default="history.csv")

    p = add("serve", cmd_serve, "run the HTTP inference service")
    p.add_argument("--model-dir")
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    p.add_argument("--config", help="JSON config file mirroring the service settings")
    p.add_argument("--init-builtin-mlr", action="store_true",
                   help="write the built-in regression model into the model dir")

    p = add("gen-synthetic", cmd_gen_synthetic,
            "generate the synthetic leaf image dataset")
    p.add_argument("--out", required=True)
    p.add_argument("--train-per-class", type=int, default=40)
    p.add_argument("--test-per-class", type=int, default=10)
    p.add_argument("--size", type=int, default=64)
    p.add_argument("--seed", type=int, default=1)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        return 130
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
