"""
Series Models - Univariate series records, sliding windows and temporal splits
"""
import numpy as np

import config
from utils.errors import DataError
from utils.validators import Validator


class SeriesRecord:
    """
    One univariate series.

    split = (train_end, val_end): train is [0, train_end), validation is
    [train_end, val_end) and test is [val_end, L). A val_end of None marks an
    archive record whose validation segment is carved from the end of train.
    `offset` is the index of values[0] inside the parent series for views.
    """

    def __init__(self, series_id, values, timestamps=None, labels=None, split=None,
                 anomaly_span=None, offset=0):
        if not Validator.validate_series_id(series_id):
            raise DataError(f"Invalid series id: {series_id!r}")
        values = np.asarray(values, dtype=np.float64)
        if values.ndim != 1 or values.size == 0:
            raise DataError(f"Series {series_id} must hold a non-empty 1-D value array")
        if not Validator.all_finite(values):
            raise DataError(f"Series {series_id} contains non-finite values")

        if labels is not None:
            labels = np.asarray(labels, dtype=np.int64)
            if labels.shape != values.shape:
                raise DataError(f"Series {series_id}: {labels.size} labels for {values.size} values")
            if np.any((labels != 0) & (labels != 1)):
                raise DataError(f"Series {series_id}: labels must be 0 or 1")

        if timestamps is not None:
            timestamps = np.asarray(timestamps, dtype=np.int64)
            if timestamps.shape != values.shape:
                raise DataError(f"Series {series_id}: {timestamps.size} timestamps for {values.size} values")
            if timestamps.size > 1:
                steps = np.diff(timestamps)
                if np.any(steps <= 0) or np.any(steps != steps[0]):
                    raise DataError(f"Series {series_id}: timestamps must increase with a constant step")

        if split is not None:
            train_end, val_end = split
            upper = values.size if val_end is None else val_end
            if not (0 <= train_end <= upper <= values.size):
                raise DataError(f"Series {series_id}: invalid split {split} for length {values.size}")
            split = (int(train_end), None if val_end is None else int(val_end))

        if anomaly_span is not None:
            begin, end = anomaly_span
            if not (0 <= begin <= end < values.size):
                raise DataError(f"Series {series_id}: anomaly span {anomaly_span} outside length {values.size}")
            anomaly_span = (int(begin), int(end))

        self.series_id = series_id
        self.values = values
        self.timestamps = timestamps
        self.labels = labels
        self.split = split
        self.anomaly_span = anomaly_span
        self.offset = int(offset)

    @classmethod
    def from_dict(cls, data):
        """Create SeriesRecord instance from dictionary"""
        if not data:
            return None
        return cls(
            series_id=data.get('series_id'),
            values=data.get('values'),
            timestamps=data.get('timestamps'),
            labels=data.get('labels'),
            split=data.get('split'),
            anomaly_span=data.get('anomaly_span'),
            offset=data.get('offset', 0),
        )

    def to_dict(self):
        return {
            'series_id': self.series_id,
            'values': self.values.tolist(),
            'timestamps': None if self.timestamps is None else self.timestamps.tolist(),
            'labels': None if self.labels is None else self.labels.tolist(),
            'split': self.split,
            'anomaly_span': self.anomaly_span,
            'offset': self.offset,
        }

    def __len__(self):
        return self.values.size

    @property
    def has_labels(self):
        return self.labels is not None

    @property
    def step_seconds(self):
        if self.timestamps is None or self.timestamps.size < 2:
            return None
        return int(self.timestamps[1] - self.timestamps[0])

    def label_array(self):
        """Labels, or zeros when the series is unlabeled"""
        if self.labels is None:
            return np.zeros(self.values.size, dtype=np.int64)
        return self.labels

    def partition_bounds(self, train_frac=config.DEFAULT_TRAIN_FRACTION, val_frac=config.DEFAULT_VAL_FRACTION):
        """Resolved (train_end, val_end) indices"""
        length = self.values.size
        if self.split is None:
            return round(length * train_frac), round(length * (train_frac + val_frac))
        train_end, val_end = self.split
        if val_end is None:
            carve = int(round(train_end * config.UCR_VALIDATION_FRACTION))
            return train_end - carve, train_end
        return train_end, val_end

    def train_values(self):
        train_end, _ = self.partition_bounds()
        return self.values[:train_end]

    def with_values(self, values):
        """Same record (ids, timestamps, labels, split) holding new values"""
        return SeriesRecord(self.series_id, values, self.timestamps, self.labels,
                            self.split, self.anomaly_span, self.offset)

    def with_split(self, split):
        return SeriesRecord(self.series_id, self.values, self.timestamps, self.labels,
                            split, self.anomaly_span, self.offset)

    def segment(self, start, end):
        """View of [start, end) re-based so `offset` points into the parent"""
        if not (0 <= start < end <= self.values.size):
            raise DataError(f"Series {self.series_id}: invalid segment [{start}, {end})")
        span = None
        if self.anomaly_span is not None:
            begin = max(self.anomaly_span[0], start)
            finish = min(self.anomaly_span[1], end - 1)
            if begin <= finish:
                span = (begin - start, finish - start)
        return SeriesRecord(
            self.series_id,
            self.values[start:end],
            None if self.timestamps is None else self.timestamps[start:end],
            None if self.labels is None else self.labels[start:end],
            None,
            span,
            self.offset + start,
        )

    def __repr__(self):
        return f"<SeriesRecord(id='{self.series_id}', length={len(self)}, split={self.split})>"


class WindowSample:
    """Length-T window ending at `end_index` of its series"""

    def __init__(self, series_id, end_index, window, timestamp=None):
        self.series_id = series_id
        self.end_index = end_index
        self.window = window
        self.timestamp = timestamp

    def __repr__(self):
        return f"<WindowSample(id='{self.series_id}', end={self.end_index}, T={self.window.size})>"


class WindowSet:
    """Ordered windows of one series stored as an (n, T) array"""

    def __init__(self, series_id, window, ends, windows, timestamps=None, too_short=False):
        self.series_id = series_id
        self.window = window
        self.ends = np.asarray(ends, dtype=np.int64)
        self.windows = windows
        self.timestamps = timestamps
        self.too_short = too_short

    def __len__(self):
        return self.ends.size

    def __getitem__(self, i):
        timestamp = None if self.timestamps is None else int(self.timestamps[i])
        return WindowSample(self.series_id, int(self.ends[i]), self.windows[i], timestamp)

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def __repr__(self):
        return f"<WindowSet(id='{self.series_id}', count={len(self)}, too_short={self.too_short})>"


class SeriesSplit:
    """Contiguous train/validation/test views of one series"""

    def __init__(self, train, val, test, bounds, warnings=None):
        self.train = train
        self.val = val
        self.test = test
        self.bounds = bounds
        self.warnings = list(warnings or [])

    def segments(self):
        return self.train, self.val, self.test

    def __repr__(self):
        return f"<SeriesSplit(bounds={self.bounds}, warnings={self.warnings})>"
