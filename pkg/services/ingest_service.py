"""
Ingest Service - Load series from multi-series CSV files and UCR archive files
"""
import logging
import os
import re

import numpy as np
import pandas as pd
from dateutil import parser as date_parser
from dateutil import tz

import config
from models.series import SeriesRecord
from storage.csv_store import csv_store
from utils.constants import GAP_POLICIES, GAP_POLICY_REJECT, GAP_POLICY_INTERPOLATE, SERIES_COLUMNS
from utils.errors import ConfigError, DataError, FormatError, SchemaError
from utils.formatters import Formatter

logger = logging.getLogger(__name__)

UCR_NAME_PATTERN = re.compile(r'^(?P<series_id>.+?)_(?P<train_end>\d+)_(?P<begin>\d+)_(?P<end>\d+)$')
EPOCH = pd.Timestamp(0, tz='UTC').to_pydatetime()


class CsvSchema:
    """Column names of a series CSV; the label column is optional in the file"""

    def __init__(self, timestamp='timestamp', series_id='series_id', value='value', label='label'):
        self.timestamp = timestamp
        self.series_id = series_id
        self.value = value
        self.label = label

    @classmethod
    def from_dict(cls, data):
        if not data:
            return cls()
        return cls(
            timestamp=data.get('timestamp', 'timestamp'),
            series_id=data.get('series_id', 'series_id'),
            value=data.get('value', 'value'),
            label=data.get('label', 'label'),
        )

    def required(self):
        return [self.timestamp, self.series_id, self.value]

    def __repr__(self):
        return f"<CsvSchema({self.timestamp}, {self.series_id}, {self.value}, {self.label})>"


def parse_timestamp(raw, line):
    """Epoch seconds from an integer string or an ISO-8601 date (naive = UTC)"""
    text = raw.strip()
    try:
        return int(text)
    except ValueError:
        pass
    try:
        moment = date_parser.isoparse(text)
    except (ValueError, OverflowError) as e:
        raise DataError(f"line {line}: unparseable timestamp {raw!r}") from e
    if moment.tzinfo is None:
        moment = moment.replace(tzinfo=tz.tzutc())
    return int((moment - EPOCH).total_seconds())


def _to_float(text):
    try:
        return float(text)
    except ValueError:
        return np.nan


def _parse_numeric_column(frame, column, kind):
    """Correctly rounded floats per cell; the first bad cell is reported by file line"""
    parsed = frame[column].str.strip().map(_to_float).to_numpy(dtype=np.float64)
    bad = ~np.isfinite(parsed)
    if bad.any():
        row = int(np.flatnonzero(bad)[0])
        raise DataError(f"line {row + 2}: unparseable {kind} {frame[column].iloc[row]!r}")
    return parsed


class IngestService:
    """Service for reading and writing series files"""

    # ==========================
    # MULTI-SERIES CSV
    # ==========================

    def load_series_csv(self, path, schema=None, gap_policy=config.DEFAULT_GAP_POLICY):
        """One SeriesRecord per distinct id, in order of first appearance"""
        schema = schema or CsvSchema()
        if gap_policy not in GAP_POLICIES:
            raise ConfigError(f"Unknown gap policy {gap_policy!r}; expected one of {GAP_POLICIES}")

        try:
            frame = csv_store.read_frame(path, dtype=str, keep_default_na=False)
        except pd.errors.EmptyDataError as e:
            raise DataError(f"{path} is empty") from e
        missing = [column for column in schema.required() if column not in frame.columns]
        if missing:
            raise SchemaError(f"{path} is missing columns {missing}; found {list(frame.columns)}")
        if frame.empty:
            raise DataError(f"{path} holds no data rows")

        values = _parse_numeric_column(frame, schema.value, "value")
        labels = None
        if schema.label in frame.columns:
            labels = _parse_numeric_column(frame, schema.label, "label")
            bad = np.flatnonzero((labels != 0) & (labels != 1))
            if bad.size:
                raise DataError(f"line {bad[0] + 2}: label must be 0 or 1, got {labels[bad[0]]}")
            labels = labels.astype(np.int64)
        timestamps = np.array([parse_timestamp(raw, i + 2) for i, raw in enumerate(frame[schema.timestamp])],
                              dtype=np.int64)
        ids = frame[schema.series_id].str.strip().to_numpy()

        records = []
        for series_id in pd.unique(ids):
            rows = np.flatnonzero(ids == series_id)
            records.append(self._assemble_series(
                series_id, rows, timestamps[rows], values[rows],
                None if labels is None else labels[rows], gap_policy,
            ))
        logger.info("Loaded %d series from %s", len(records), path)
        return records

    def _assemble_series(self, series_id, rows, timestamps, values, labels, gap_policy):
        if timestamps.size < 2:
            return SeriesRecord(series_id, values, timestamps, labels)

        steps = np.diff(timestamps)
        backwards = np.flatnonzero(steps <= 0)
        if backwards.size:
            line = rows[backwards[0] + 1] + 2
            raise DataError(f"line {line}: timestamps of series {series_id} are not strictly increasing")

        step = int(steps.min())
        irregular = np.flatnonzero(steps % step != 0)
        if irregular.size:
            line = rows[irregular[0] + 1] + 2
            raise DataError(f"line {line}: irregular timestamp step in series {series_id} (base step {step}s)")

        gaps = np.flatnonzero(steps != step)
        if gaps.size == 0:
            return SeriesRecord(series_id, values, timestamps, labels)
        if gap_policy == GAP_POLICY_REJECT:
            line = rows[gaps[0] + 1] + 2
            raise DataError(f"line {line}: missing samples in series {series_id} (gap of {steps[gaps[0]]}s)")

        grid = np.arange(timestamps[0], timestamps[-1] + step, step, dtype=np.int64)
        filled = np.interp(grid, timestamps, values)
        filled[(timestamps - timestamps[0]) // step] = values
        filled_labels = np.zeros(grid.size, dtype=np.int64)
        if labels is not None:
            filled_labels[(timestamps - timestamps[0]) // step] = labels
        logger.warning("Series %s: interpolated %d missing samples", series_id, grid.size - timestamps.size)
        return SeriesRecord(series_id, filled, grid, filled_labels if labels is not None else None)

    def write_series_csv(self, records, path):
        """Write records in the `timestamp,series_id,value,label` layout"""
        frames = []
        for record in records:
            timestamps = record.timestamps if record.timestamps is not None else np.arange(len(record))
            frames.append(pd.DataFrame({
                'timestamp': timestamps.astype(np.int64),
                'series_id': record.series_id,
                'value': record.values,
                'label': record.label_array(),
            }, columns=SERIES_COLUMNS))
        return csv_store.write_frame(pd.concat(frames, ignore_index=True), path)

    # ==========================
    # UCR ARCHIVE FILES
    # ==========================

    def load_ucr_file(self, path):
        """Parse `<id>_<train_end>_<begin>_<end>.txt`; labels are 1 on [begin, end]"""
        stem = os.path.splitext(os.path.basename(path))[0]
        match = UCR_NAME_PATTERN.match(stem)
        if not match:
            raise FormatError(f"{os.path.basename(path)} does not end with _<train_end>_<begin>_<end>")
        if not os.path.exists(path):
            raise DataError(f"Input file not found: {path}")

        values = []
        for number, line in enumerate(csv_store.read_text(path).splitlines(), start=1):
            for token in line.split():
                try:
                    values.append(float(token))
                except ValueError as e:
                    raise DataError(f"line {number}: unparseable value {token!r} in {path}") from e
        values = np.asarray(values, dtype=np.float64)
        if values.size == 0:
            raise DataError(f"{path} holds no values")

        train_end = int(match.group('train_end'))
        begin, end = int(match.group('begin')), int(match.group('end'))
        if not (0 <= begin <= end < values.size):
            raise DataError(f"Anomaly span ({begin}, {end}) lies outside series of length {values.size}")
        if not (0 < train_end <= values.size):
            raise DataError(f"Train boundary {train_end} lies outside series of length {values.size}")

        labels = np.zeros(values.size, dtype=np.int64)
        labels[begin:end + 1] = 1
        return SeriesRecord(match.group('series_id'), values, labels=labels,
                            split=(train_end, None), anomaly_span=(begin, end))

    def write_ucr_file(self, record, directory):
        """Inverse of load_ucr_file; returns the written path"""
        if record.split is None or record.anomaly_span is None:
            raise DataError(f"Series {record.series_id} needs a split and an anomaly span for the archive format")
        begin, end = record.anomaly_span
        name = f"{record.series_id}_{record.split[0]}_{begin}_{end}.txt"
        text = "".join(Formatter.format_float(v) + "\n" for v in record.values)
        return csv_store.write_text(os.path.join(directory, name), text)


# Global ingest service instance
ingest_service = IngestService()
