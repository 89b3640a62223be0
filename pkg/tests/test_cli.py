import json

import numpy as np
import pytest

from cypurnn.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture(scope="module")
def trained_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("yield-model")
    code = main(["train-yield", "--data", "fixtures/table1_sensor_samples.csv",
                 "--seed", "1", "--epochs", "60", "--out", str(out)])
    assert code == 0
    return out


@pytest.fixture(scope="module")
def data_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("leaves")
    code = main(["gen-synthetic", "--out", str(out), "--train-per-class", "3",
                 "--test-per-class", "1", "--size", "16", "--seed", "1"])
    assert code == 0
    return out


@pytest.fixture(scope="module")
def model_dir(tmp_path_factory, data_dir):
    out = tmp_path_factory.mktemp("disease-model")
    code = main(["train-disease", "--data", str(data_dir / "train"),
                 "--out", str(out), "--seed", "1", "--epochs", "8",
                 "--input-size", "16"])
    assert code == 0
    return out


class TestPredictYield:
    def test_canonical_human_output(self, capsys):
        code, out, err = run(capsys, "predict-yield", "--area", "1",
                             "--state", "Andhra Pradesh", "--season", "Autumn")
        assert code == 0
        assert out == "Predicted Yield is 1.969\n"

    def test_json_output_full_precision(self, capsys):
        code, out, _ = run(capsys, "predict-yield", "--area", "1",
                           "--state", "Andhra Pradesh", "--season", "Autumn", "--json")
        assert code == 0
        body = json.loads(out)
        assert body["predicted_yield"] == pytest.approx(1.969, abs=1e-9)
        assert body["model_version"] == "paper-mlr-v1"

    def test_unknown_state_exit_1_and_lists_valid_states(self, capsys):
        code, out, err = run(capsys, "predict-yield", "--area", "1",
                             "--state", "Goa", "--season", "Autumn")
        assert code == 1
        assert out == ""
        for state in ("Andhra Pradesh", "Karnataka", "Kerala", "Pondicherry", "Tamil Nadu"):
            assert state in err

    def test_negative_area_exit_1(self, capsys):
        code, _, err = run(capsys, "predict-yield", "--area", "-2",
                           "--state", "Kerala", "--season", "Rabi")
        assert code == 1
        assert "area" in err

    def test_unknown_flag_is_an_error(self, capsys):
        code, _, err = run(capsys, "predict-yield", "--area", "1",
                           "--state", "Kerala", "--season", "Rabi", "--bogus")
        assert code == 1
        assert err

    def test_missing_subcommand(self, capsys):
        code, _, err = run(capsys)
        assert code == 1


class TestTrainYieldAndPredictImpact:
    def test_writes_model_files_and_history(self, trained_dir, capsys):
        capsys.readouterr()
        assert (trained_dir / "yield.json").exists()
        assert (trained_dir / "yield.weights").exists()
        assert (trained_dir / "yield.meta.json").exists()
        history = (trained_dir / "history.csv").read_text().splitlines()
        assert history[0] == "epoch,loss,accuracy"
        assert len(history) == 61

    def test_prints_final_rmse(self, capsys, tmp_path):
        code, out, _ = run(capsys, "train-yield",
                           "--data", "fixtures/table1_sensor_samples.csv",
                           "--seed", "1", "--epochs", "30", "--out", str(tmp_path))
        assert code == 0
        assert "Training RMSE is " in out

    def test_training_is_byte_deterministic(self, tmp_path, capsys):
        for sub in ("a", "b"):
            code = main(["train-yield", "--data", "fixtures/table1_sensor_samples.csv",
                         "--seed", "7", "--epochs", "40", "--out", str(tmp_path / sub)])
            assert code == 0
        capsys.readouterr()
        assert (tmp_path / "a" / "yield.weights").read_bytes() == \
            (tmp_path / "b" / "yield.weights").read_bytes()
        assert (tmp_path / "a" / "history.csv").read_text() == \
            (tmp_path / "b" / "history.csv").read_text()

    def test_predict_impact_json(self, trained_dir, capsys):
        code, out, _ = run(capsys, "predict-impact", "--temperature-c", "29",
                           "--humidity-pct", "78", "--pressure-mbar", "115.78",
                           "--model-dir", str(trained_dir), "--json")
        assert code == 0
        body = json.loads(out)
        assert body["impact"] in ("Positive", "Negative")
        assert (body["impact"] == "Negative") == (body["expected_yield_pct"] < 50)

    def test_predict_impact_invalid_reading(self, trained_dir, capsys):
        code, _, err = run(capsys, "predict-impact", "--temperature-c", "29",
                           "--humidity-pct", "140", "--pressure-mbar", "115.78",
                           "--model-dir", str(trained_dir))
        assert code == 1
        assert "humidity" in err

    def test_missing_model_dir_is_runtime_error(self, capsys, tmp_path):
        code, _, err = run(capsys, "predict-impact", "--temperature-c", "29",
                           "--humidity-pct", "78", "--pressure-mbar", "115.78",
                           "--model-dir", str(tmp_path / "nope"))
        assert code == 2
        assert "model" in err.lower()

    def test_missing_data_file_is_runtime_error(self, capsys, tmp_path):
        code, _, err = run(capsys, "train-yield", "--data", str(tmp_path / "no.csv"),
                           "--out", str(tmp_path))
        assert code == 2

    def test_eval_yield_model(self, trained_dir, capsys, tmp_path):
        history_out = tmp_path / "curve.csv"
        code, out, _ = run(capsys, "eval", "--model-dir", str(trained_dir),
                           "--data", "fixtures/table1_sensor_samples.csv",
                           "--history-out", str(history_out), "--json")
        assert code == 0
        body = json.loads(out)
        assert body["metric"] == "rmse"
        assert body["rmse"] >= 0
        lines = history_out.read_text().splitlines()
        assert lines[0] == "epoch,loss,accuracy"
        assert len(lines) == 61  # header + one row per epoch


class TestDiseasePipeline:
    def test_gen_synthetic_layout(self, data_dir, capsys):
        capsys.readouterr()
        for split, expected in (("train", 3), ("test", 1)):
            for cls in ("Healthy", "Hispa", "LeafBlast", "BrownSpot"):
                files = list((data_dir / split / cls).glob("*.png"))
                assert len(files) == expected

    def test_train_disease_writes_model(self, model_dir, capsys):
        capsys.readouterr()
        assert (model_dir / "disease.json").exists()
        assert (model_dir / "disease.meta.json").exists()
        assert (model_dir / "history.csv").exists()

    def test_classify_image(self, model_dir, data_dir, capsys):
        image = next((data_dir / "test" / "Healthy").glob("*.png"))
        code, out, _ = run(capsys, "classify", "--model-dir", str(model_dir),
                           "--image", str(image), "--json")
        assert code == 0
        body = json.loads(out)
        assert body["class"] in ("Healthy", "Hispa", "LeafBlast", "BrownSpot")
        assert body["species"] == "Oryza sativa"
        assert "ailment" in body

    def test_classify_human_output_has_ailment_line(self, model_dir, data_dir, capsys):
        image = next((data_dir / "test" / "Hispa").glob("*.png"))
        code, out, _ = run(capsys, "classify", "--model-dir", str(model_dir),
                           "--image", str(image))
        assert code == 0
        assert "Class: " in out and "Confidence: " in out

    def test_classify_unreadable_image(self, model_dir, tmp_path, capsys):
        bad = tmp_path / "not_an_image.png"
        bad.write_text("hello")
        code, _, err = run(capsys, "classify", "--model-dir", str(model_dir),
                           "--image", str(bad))
        assert code == 2
        assert "decode" in err

    def test_eval_disease_model(self, model_dir, data_dir, capsys, tmp_path):
        code, out, _ = run(capsys, "eval", "--model-dir", str(model_dir),
                           "--data", str(data_dir / "test"), "--json",
                           "--history-out", str(tmp_path / "h.csv"))
        assert code == 0
        body = json.loads(out)
        assert body["metric"] == "accuracy"
        assert 0.0 <= body["accuracy"] <= 1.0

    def test_eval_on_training_data_matches_recorded_history(self, model_dir, data_dir,
                                                            capsys, tmp_path):
        code, out, _ = run(capsys, "eval", "--model-dir", str(model_dir),
                           "--data", str(data_dir / "train"), "--json",
                           "--history-out", str(tmp_path / "h.csv"))
        assert code == 0
        final_row = (model_dir / "history.csv").read_text().strip().splitlines()[-1]
        final_training_accuracy = float(final_row.split(",")[2])
        assert json.loads(out)["accuracy"] == pytest.approx(final_training_accuracy,
                                                            abs=1e-12)

    def test_human_and_json_report_same_value(self, model_dir, data_dir, capsys, tmp_path):
        args = ["eval", "--model-dir", str(model_dir), "--data", str(data_dir / "test"),
                "--history-out", str(tmp_path / "h.csv")]
        code, human, _ = run(capsys, *args)
        code2, machine, _ = run(capsys, *args, "--json")
        assert code == code2 == 0
        value = json.loads(machine)["accuracy"]
        assert f"Accuracy is {value:.3f}" in human


class TestServeConfig:
    def test_port_zero_is_usage_error(self, capsys, tmp_path):
        code, _, err = run(capsys, "serve", "--model-dir", str(tmp_path), "--port", "0")
        assert code == 1
        assert "port" in err

    def test_missing_config_file_is_runtime_error(self, capsys, tmp_path):
        code, _, err = run(capsys, "serve", "--model-dir", str(tmp_path),
                           "--config", str(tmp_path / "absent.json"))
        assert code == 2


class TestGenSyntheticJson:
    def test_json_document(self, capsys, tmp_path):
        code, out, _ = run(capsys, "gen-synthetic", "--out", str(tmp_path),
                           "--train-per-class", "1", "--test-per-class", "1",
                           "--size", "16", "--json")
        assert code == 0
        body = json.loads(out)
        assert body["train_images"] == 4
        assert body["test_images"] == 4
