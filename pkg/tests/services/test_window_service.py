"""
Tests for sliding windows and temporal splits
"""
import numpy as np
import pytest

from models.series import SeriesRecord
from services.window_service import WindowService, window_service
from utils.errors import ConfigError, DataError


def _ramp(length, series_id="s", **kwargs):
    return SeriesRecord(series_id, np.arange(length, dtype=np.float64), **kwargs)


class TestMakeWindows:

    def test_window_count(self):
        assert len(window_service.make_windows(_ramp(100), 56)) == 45
        assert len(window_service.make_windows(_ramp(56), 56)) == 1

    def test_stride_ends(self):
        windows = window_service.make_windows(_ramp(10), 4, stride=3)
        np.testing.assert_array_equal(windows.ends, [3, 6, 9])

    def test_too_short_series(self):
        windows = window_service.make_windows(_ramp(5), 8)
        assert windows.too_short
        assert len(windows) == 0

    def test_last_elements_reconstruct_series(self):
        series = _ramp(30)
        windows = window_service.make_windows(series, 6)
        np.testing.assert_array_equal(windows.windows[:, -1], series.values[5:])
        for sample in windows:
            np.testing.assert_array_equal(sample.window, series.values[sample.end_index - 5:sample.end_index + 1])

    def test_first_end_clamped_to_window(self):
        windows = window_service.make_windows(_ramp(20), 8, first_end=2, last_end=10)
        np.testing.assert_array_equal(windows.ends, [7, 8, 9, 10])

    def test_end_timestamps(self):
        series = _ramp(10, timestamps=np.arange(10) * 60)
        windows = window_service.make_windows(series, 4)
        assert windows[0].timestamp == 180

    def test_bad_window(self):
        with pytest.raises(ConfigError):
            window_service.make_windows(_ramp(10), 0)
        with pytest.raises(ConfigError):
            window_service.make_windows(_ramp(10), 4, stride=0)


class TestTemporalSplit:

    def test_default_fractions(self):
        split = window_service.temporal_split(_ramp(7))
        assert [len(segment) for segment in split.segments()] == [3, 1, 3]
        assert split.test.offset == 4

    def test_explicit_fractions(self):
        split = WindowService.temporal_split(_ramp(8), (0.5, 0.25))
        assert [len(segment) for segment in split.segments()] == [4, 2, 2]

    def test_segments_are_contiguous(self):
        series = _ramp(50)
        split = window_service.temporal_split(series, (20, 35))
        joined = np.concatenate([segment.values for segment in split.segments()])
        np.testing.assert_array_equal(joined, series.values)

    def test_archive_split_carves_validation(self):
        series = _ramp(200, split=(100, None))
        assert window_service.temporal_split(series).bounds == (80, 100)

    def test_empty_and_short_segments_warn(self):
        split = window_service.temporal_split(_ramp(10, split=(6, 6)), window=5)
        assert split.val is None
        assert "val:empty" in split.warnings
        assert "test:shorter_than_window" in split.warnings

    def test_bad_boundaries(self):
        with pytest.raises(DataError):
            window_service.temporal_split(_ramp(10), (6, 12))
        with pytest.raises(ConfigError):
            window_service.temporal_split(_ramp(10), (0.8, 0.3))
