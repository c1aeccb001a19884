"""
Tests for run configuration parsing
"""
import pytest

from models.run_config import parse_config
from utils.errors import ConfigError


class TestParseConfig:

    def test_empty_file_gives_defaults(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("# nothing set\n\n")
        run_config = parse_config(str(path))
        assert (run_config['T'], run_config['J'], run_config['U'], run_config['F']) == (256, 48, 128, 2)
        assert run_config['learning_rate'] == 6e-5
        assert run_config['batch_size'] == 32
        assert run_config['alpha_grid'] == [1, 2, 3, 4, 5, 6]

    def test_override_wins(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("T=128\nJ=16\n")
        run_config = parse_config(str(path), ["T=64"])
        assert run_config['T'] == 64
        assert run_config['J'] == 16

    def test_unknown_key_is_named(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("lerning_rate=0.001\n")
        with pytest.raises(ConfigError, match="lerning_rate"):
            parse_config(str(path))

    def test_unknown_override(self):
        with pytest.raises(ConfigError, match="bogus"):
            parse_config(None, ["bogus=1"])

    def test_type_mismatch_names_expected_type(self):
        with pytest.raises(ConfigError, match="integer"):
            parse_config(None, ["T=abc"])
        with pytest.raises(ConfigError, match="number"):
            parse_config(None, ["beta=high"])

    def test_malformed_line(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("just words\n")
        with pytest.raises(ConfigError):
            parse_config(str(path))

    def test_derived_settings(self):
        run_config = parse_config(None, ["T=32", "J=4", "U=8", "learning_rate=0.01", "alpha_grid=2,4"])
        hyper = run_config.hyperparams()
        assert hyper.depth == 5
        assert run_config.train_config().gamma == 0.01
        assert run_config['alpha_grid'] == [2, 4]

    def test_leave_out_groups(self):
        assert parse_config(None).leave_out_groups() == [[]]
        groups = parse_config(None, ["leave_out=;c;b,c"]).leave_out_groups()
        assert groups == [[], ["c"], ["b", "c"]]

    def test_gap_policy_checked(self):
        with pytest.raises(ConfigError):
            parse_config(None, ["gap_policy=guess"])
