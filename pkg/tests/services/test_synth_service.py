"""
Tests for the synthetic seasonal generator
"""
import numpy as np
import pytest

from services.synth_service import SeriesComponents, synth_generate, synth_service
from utils.errors import ConfigError, DataError


class TestSynthGenerate:

    def test_pure_seasonality(self):
        series = synth_generate(SeriesComponents(period=4), 4, seed=0)
        np.testing.assert_allclose(series.values, [0.0, 1.0, 0.0, -1.0], atol=1e-12)
        assert not series.labels.any()
        np.testing.assert_array_equal(series.timestamps, [0, 300, 600, 900])

    def test_spike_is_labeled(self):
        base = synth_generate(SeriesComponents(period=8), 40, seed=0)
        spiked = synth_generate(SeriesComponents(period=8, spikes=[(10, 5.0)]), 40, seed=0)
        assert spiked.values[10] == pytest.approx(base.values[10] + 5.0)
        assert spiked.labels.sum() == 1 and spiked.labels[10] == 1

    def test_spike_outside_series(self):
        with pytest.raises(DataError):
            synth_generate(SeriesComponents(period=8, spikes=[(40, 1.0)]), 40, seed=0)

    def test_seeded_noise_is_reproducible(self):
        components = SeriesComponents(period=8, noise_std=0.3)
        first = synth_generate(components, 100, seed=5)
        second = synth_generate(components, 100, seed=5)
        other = synth_generate(components, 100, seed=6)
        assert first.values.tobytes() == second.values.tobytes()
        assert first.values.tobytes() != other.values.tobytes()

    def test_weekend_scaling(self):
        period = 4
        series = synth_generate(SeriesComponents(period=period, weekend_scale=0.5), 7 * period, seed=0)
        weekday_peak = series.values[1]
        assert series.values[5 * period + 1] == pytest.approx(0.5 * weekday_peak)
        assert series.values[6 * period + 1] == pytest.approx(0.5 * weekday_peak)
        assert series.values[4 * period + 1] == pytest.approx(weekday_peak)

    def test_trend_and_level(self):
        series = synth_generate(SeriesComponents(period=4, amplitude=0.0, trend_per_period=2.0, level=1.0), 9, seed=0)
        np.testing.assert_allclose(series.values, 1.0 + 2.0 * np.arange(9) / 4.0)

    def test_bad_components(self):
        with pytest.raises(ConfigError):
            SeriesComponents(period=1)
        with pytest.raises(ConfigError):
            SeriesComponents(period=4, noise_std=-1.0)
        with pytest.raises(ConfigError):
            SeriesComponents.parse_spikes("10-5")


class TestSpecFile:

    def test_generate_from_file(self, tmp_path):
        path = tmp_path / "synth.cfg"
        path.write_text(
            "length=64\nseed=3\nstep_seconds=60\n"
            "cpu.period=16\ncpu.noise_std=0.1\ncpu.spikes=20:4;40:-4\n"
            "mem.period=8\nmem.level=10\n"
        )
        records = synth_service.generate_from_file(str(path))
        assert [r.series_id for r in records] == ["cpu", "mem"]
        assert all(len(r) == 64 for r in records)
        assert records[0].labels.sum() == 2
        assert records[0].step_seconds == 60
        again = synth_service.generate_from_file(str(path))
        assert records[0].values.tobytes() == again[0].values.tobytes()

    def test_unknown_field(self):
        with pytest.raises(ConfigError):
            synth_service.generate_from_spec({'length': '10', 'a.period': '4', 'a.colour': 'red'})

    def test_no_series(self):
        with pytest.raises(ConfigError):
            synth_service.generate_from_spec({'length': '10'})
