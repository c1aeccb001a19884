"""
Window Service - Sliding windows and temporal train/validation/test splits
"""
import logging

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from models.series import WindowSet, SeriesSplit
from utils.errors import ConfigError, DataError
from utils.validators import Validator

logger = logging.getLogger(__name__)


class WindowService:
    """Service for windowing and splitting series"""

    @staticmethod
    def make_windows(series, window, stride=1, first_end=None, last_end=None):
        """
        Windows ending at first_end, first_end+stride, ... <= last_end.

        Ends default to T-1 .. L-1; an explicit first_end below T-1 is raised
        to T-1 so no window ever reads before index 0.
        """
        if not Validator.validate_positive_integer(window):
            raise ConfigError(f"Window length must be a positive integer, got {window}")
        if not Validator.validate_positive_integer(stride):
            raise ConfigError(f"Stride must be a positive integer, got {stride}")

        length = len(series)
        if length < window:
            logger.warning("Series %s (length %d) is shorter than the window T=%d; skipped",
                           series.series_id, length, window)
            return WindowSet(series.series_id, window, [], np.empty((0, window)), too_short=True)

        start = window - 1 if first_end is None else max(window - 1, int(first_end))
        stop = length - 1 if last_end is None else min(length - 1, int(last_end))
        ends = np.arange(start, stop + 1, stride, dtype=np.int64)
        windows = sliding_window_view(series.values, window)[ends - window + 1]
        timestamps = None if series.timestamps is None else series.timestamps[ends]
        return WindowSet(series.series_id, window, ends, windows, timestamps)

    @staticmethod
    def resolve_bounds(series, boundaries=None):
        """(train_end, val_end) from fractions, explicit indices or the record's own split"""
        length = len(series)
        if boundaries is None:
            return series.partition_bounds()

        first, second = boundaries
        if isinstance(first, (float, np.floating)) or isinstance(second, (float, np.floating)):
            if not (Validator.validate_fraction(first) and Validator.validate_fraction(second)):
                raise ConfigError(f"Split fractions must lie in (0, 1), got {boundaries}")
            if first + second >= 1.0:
                raise ConfigError(f"Split fractions must sum below 1, got {boundaries}")
            return series.with_split(None).partition_bounds(first, second)

        train_end, val_end = int(first), int(second)
        if not (0 < train_end <= val_end < length):
            raise DataError(f"Invalid split indices {boundaries} for length {length}")
        return train_end, val_end

    @staticmethod
    def temporal_split(series, boundaries=None, window=None):
        """Contiguous ordered train/val/test views; empty segments come back as None"""
        train_end, val_end = WindowService.resolve_bounds(series, boundaries)
        length = len(series)
        names = ('train', 'val', 'test')
        spans = ((0, train_end), (train_end, val_end), (val_end, length))

        segments, warnings = [], []
        for name, (start, end) in zip(names, spans):
            if end <= start:
                segments.append(None)
                warnings.append(f"{name}:empty")
                continue
            segments.append(series.segment(start, end))
            if window is not None and end - start < window:
                warnings.append(f"{name}:shorter_than_window")

        for warning in warnings:
            logger.warning("Series %s split %s: %s", series.series_id, (train_end, val_end), warning)
        return SeriesSplit(*segments, bounds=(train_end, val_end), warnings=warnings)


# Global window service instance
window_service = WindowService()
