"""
Tests for the command dispatcher and the main entry point
"""
import os

import numpy as np
import pandas as pd
import pytest

from cli.commands import command_dispatcher, emit_plot_csv
from main import main
from models.results import DetectionResult
from utils.errors import ConfigError

SYNTH_SPEC = (
    "length=320\nseed=0\n"
    "cpu.period=16\ncpu.noise_std=0.05\ncpu.spikes=250:3;300:5\n"
    "mem.period=16\nmem.amplitude=2\nmem.level=4\nmem.noise_std=0.05\nmem.spikes=290:6\n"
)
TOY_SETTINGS = ["T=16", "J=2", "U=4", "max_epochs=2", "batch_size=16", "learning_rate=0.005"]


@pytest.fixture
def synth_spec(tmp_path):
    path = tmp_path / "synth.cfg"
    path.write_text(SYNTH_SPEC)
    return str(path)


def _run(command, output_dir, synth_spec, *extra):
    overrides = [f"output_dir={output_dir}", f"synth_spec={synth_spec}"] + TOY_SETTINGS + list(extra)
    return command_dispatcher.run(command, None, overrides)


class TestPipeline:

    def test_synth_train_detect(self, tmp_path, synth_spec):
        out = tmp_path / "run"
        assert _run("synth", out, synth_spec)['exit_code'] == 0
        assert (out / "series.csv").exists()

        trained = _run("train", out, synth_spec)
        assert trained['success'], trained['message']
        assert (out / "model.fae").exists() and (out / "history.csv").exists()

        detected = _run("detect", out, synth_spec)
        assert detected['exit_code'] == 0
        scores = pd.read_csv(out / "scores_cpu.csv")
        assert list(scores.columns) == ['series_id', 't', 'timestamp', 'x', 'mu', 'sigma', 'score', 'flag']
        assert len(scores) == 320 - 16 + 1
        assert (out / "scores_mem.csv").exists()

    def test_rerun_is_byte_identical(self, tmp_path, synth_spec):
        outputs = []
        for name in ("first", "second"):
            out = tmp_path / name
            for command in ("train", "detect"):
                assert _run(command, out, synth_spec)['exit_code'] == 0
            outputs.append(out)
        for file_name in ("scores_cpu.csv", "scores_mem.csv", "history.csv", "model.fae"):
            assert (outputs[0] / file_name).read_bytes() == (outputs[1] / file_name).read_bytes()

    def test_detect_from_csv_source(self, tmp_path, synth_spec):
        out = tmp_path / "run"
        _run("synth", out, synth_spec)
        _run("train", out, synth_spec)
        result = command_dispatcher.run("detect", None, [f"output_dir={out}", f"data_csv={out / 'series.csv'}",
                                                         "T=16", "J=2", "U=4"])
        assert result['exit_code'] == 0
        assert "series_id=cpu" in result['message']

    def test_truncated_model_fails_without_outputs(self, tmp_path, synth_spec):
        out = tmp_path / "run"
        _run("train", out, synth_spec)
        model_path = out / "model.fae"
        model_path.write_bytes(model_path.read_bytes()[:-8])
        result = _run("detect", out, synth_spec)
        assert result['exit_code'] == 4
        assert result['family'] == "format"
        assert not list(out.glob("scores_*.csv"))

    def test_eval_writes_pooled_metrics(self, tmp_path, synth_spec):
        out = tmp_path / "run"
        _run("train", out, synth_spec)
        result = _run("eval", out, synth_spec)
        assert result['exit_code'] == 0, result['message']
        metrics = pd.read_csv(out / "metrics.csv")
        assert list(metrics['series_id']) == ["cpu", "mem", "__pooled__"]
        assert metrics['tp'].iloc[-1] == metrics['tp'].iloc[:-1].sum()

    def test_latent_projections(self, tmp_path, synth_spec):
        out = tmp_path / "run"
        _run("train", out, synth_spec)
        result = _run("latent", out, synth_spec, "pca_components=2")
        assert result['exit_code'] == 0, result['message']
        table = pd.read_csv(out / "projections.csv")
        assert len(table) == 2 * (320 - 16 + 1)
        assert table['pc3'].isna().all()
        assert set(table['hour_bucket']) <= set(range(8))

    def test_latent_rejects_too_many_components(self, tmp_path, synth_spec):
        out = tmp_path / "run"
        _run("train", out, synth_spec)
        assert _run("latent", out, synth_spec)['exit_code'] == 2

    def test_zeroshot_runs(self, tmp_path, synth_spec):
        out = tmp_path / "run"
        result = _run("zeroshot", out, synth_spec, "leave_out=;mem")
        assert result['exit_code'] == 0, result['message']
        second = pd.read_csv(out / "zeroshot_run2.csv")
        assert list(second['held_out']) == [0, 1]


class TestFailures:

    def test_unknown_key(self, tmp_path):
        result = command_dispatcher.run("info", None, ["lerning_rate=0.1"])
        assert result['exit_code'] == 2
        assert "lerning_rate" in result['message']

    def test_missing_input_file(self, tmp_path):
        result = command_dispatcher.run("train", None, [f"data_csv={tmp_path / 'absent.csv'}",
                                                        f"output_dir={tmp_path}"])
        assert result['exit_code'] == 3

    def test_no_data_source(self, tmp_path):
        assert command_dispatcher.run("train", None, [f"output_dir={tmp_path}"])['exit_code'] == 2

    def test_unknown_command(self):
        assert command_dispatcher.run("fly")['exit_code'] == 2

    def test_csv_with_invalid_utf8(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_bytes(b"timestamp,series_id,value\n0,a,1.0\n300,a,\xff\n")
        result = command_dispatcher.run("train", None, [f"data_csv={path}", f"output_dir={tmp_path}"])
        assert result['exit_code'] == 3
        assert result['family'] == "data"

    def test_csv_with_ragged_row(self, tmp_path):
        path = tmp_path / "ragged.csv"
        path.write_text("timestamp,series_id,value\n0,a,1.0\n300,a,2.0,4,5\n")
        result = command_dispatcher.run("train", None, [f"data_csv={path}", f"output_dir={tmp_path}"])
        assert result['exit_code'] == 3
        assert "ragged.csv" in result['message']

    def test_ucr_file_with_invalid_utf8(self, tmp_path):
        path = tmp_path / "001_s_10_20_25.txt"
        path.write_bytes(b"1.0\n2.0\n\xfe\xff\n")
        result = command_dispatcher.run("train", None, [f"data_ucr={path}", f"output_dir={tmp_path}"])
        assert result['exit_code'] == 3
        assert result['family'] == "data"

    def test_config_file_with_invalid_utf8(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_bytes(b"T=16\nJ=\xff\n")
        result = command_dispatcher.run("info", str(path))
        assert result['exit_code'] == 3


class TestEmitPlotCsv:

    def test_empty_result_writes_header_only(self, tmp_path):
        path = emit_plot_csv(DetectionResult.empty("s", 3), str(tmp_path / "empty.csv"))
        assert open(path).read() == "series_id,t,timestamp,x,mu,sigma,score,flag\n"

    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(0)
        x, mu, sigma = rng.normal(size=5), rng.normal(size=5), rng.uniform(0.1, 2.0, size=5)
        result = DetectionResult("s", np.arange(5), x, mu, sigma, np.abs(x - mu) / sigma, 3,
                                 timestamps=60 * np.arange(5))
        frame = pd.read_csv(emit_plot_csv(result, str(tmp_path / "scores.csv")), float_precision='round_trip')
        for column in ('x', 'mu', 'sigma', 'score'):
            assert frame[column].to_numpy().tobytes() == getattr(result, column).tobytes()
        np.testing.assert_array_equal(frame['timestamp'], 60 * np.arange(5))

    def test_unsupported_object(self, tmp_path):
        with pytest.raises(ConfigError):
            emit_plot_csv({'x': 1}, str(tmp_path / "bad.csv"))


class TestMain:

    def test_info_reports_best_configuration(self, capsys):
        assert main(["info"]) == 0
        assert "N=8 params=483840" in capsys.readouterr().out

    def test_info_reads_model_header(self, tmp_path, synth_spec, capsys):
        out = tmp_path / "run"
        _run("train", out, synth_spec)
        assert main(["info", "--set", f"model_path={out / 'model.fae'}"]) == 0
        printed = capsys.readouterr().out
        assert "T=16" in printed and "norm.cpu=" in printed
        assert "N=4 params=" in printed

    def test_error_line(self, capsys):
        assert main(["info", "--set", "T=abc"]) == 2
        err = capsys.readouterr().err
        assert "error=config message=Config key 'T' expects integer" in err

    def test_parser_failure_is_one_error_line(self, tmp_path, capsys):
        path = tmp_path / "ragged.csv"
        path.write_text("timestamp,series_id,value\n0,a,1.0\n300,a,2.0,4,5\n")
        assert main(["train", "--set", f"data_csv={path}", "--set", f"output_dir={tmp_path}"]) == 3
        err_lines = [line for line in capsys.readouterr().err.splitlines() if line.startswith("error=")]
        assert len(err_lines) == 1
        assert err_lines[0].startswith("error=data message=Malformed CSV")

    def test_missing_config_file(self, tmp_path, capsys):
        assert main(["train", "--config", str(tmp_path / "absent.cfg")]) == 3
        assert "error=data" in capsys.readouterr().err
