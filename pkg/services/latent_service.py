"""
Latent Service - Encode window sets, principal components and annotated projection tables
"""
import logging
from datetime import datetime

import numpy as np
import pandas as pd
from dateutil import tz

import config
from engine.network import encode
from models.latent import LatentMatrix, PcaResult
from services.detection_service import detection_service
from services.window_service import window_service
from utils.constants import PROJECTION_COLUMNS
from utils.errors import ConfigError

logger = logging.getLogger(__name__)

HOURS_PER_BUCKET = 24 // config.HOUR_BUCKETS
WEEKEND_START = 5
PROJECTION_AXES = ('pc1', 'pc2', 'pc3')


class LatentService:
    """Service for latent-space analysis"""

    # ==========================
    # ENCODING
    # ==========================

    @staticmethod
    def encode_dataset(model, window_sets, chunk_size=config.EVAL_CHUNK_SIZE):
        """One mu_z row per window (epsilon-free), in window-set order"""
        rows, series_ids, ends, timestamps = [], [], [], []
        has_timestamps = all(ws.timestamps is not None for ws in window_sets)
        for window_set in window_sets:
            for start in range(0, len(window_set), chunk_size):
                batch = window_set.windows[start:start + chunk_size, np.newaxis, :]
                mu_z, _ = encode(model, batch)
                rows.append(mu_z)
            series_ids.extend([window_set.series_id] * len(window_set))
            ends.append(window_set.ends)
            if has_timestamps:
                timestamps.append(window_set.timestamps)

        matrix = np.concatenate(rows, axis=0) if rows else np.empty((0, model.hyper.latent_dim))
        end_indices = np.concatenate(ends) if ends else np.empty(0, dtype=np.int64)
        stamps = None
        if has_timestamps and window_sets:
            stamps = np.concatenate(timestamps) if timestamps else np.empty(0, dtype=np.int64)
        return LatentMatrix(matrix, series_ids, end_indices, stamps)

    def encode_series(self, model, series_list, stride=1):
        """Normalize (fallback statistics for unknown ids), window and encode"""
        window_sets = []
        for series in series_list:
            normalizer, _ = detection_service.normalizer_for(model, series)
            windows = window_service.make_windows(normalizer.apply_record(series), model.hyper.window, stride)
            if len(windows):
                window_sets.append(windows)
        return self.encode_dataset(model, window_sets)

    # ==========================
    # PRINCIPAL COMPONENTS
    # ==========================

    @staticmethod
    def pca_project(matrix, k=config.DEFAULT_PCA_COMPONENTS):
        """(PcaResult, n x k projections) from the population covariance of the rows"""
        rows = matrix.rows if isinstance(matrix, LatentMatrix) else np.asarray(matrix, dtype=np.float64)
        n, dim = rows.shape
        if not 1 <= k <= dim:
            raise ConfigError(f"Number of components k={k} must lie in [1, J={dim}]")
        if n < 2:
            raise ConfigError(f"PCA needs at least 2 rows, got {n}")

        mean = rows.mean(axis=0)
        centered = rows - mean
        covariance = centered.T @ centered / n
        eigenvalues, eigenvectors = np.linalg.eigh(covariance)
        order = np.argsort(eigenvalues, kind='stable')[::-1][:k]
        components = eigenvectors[:, order].T.copy()
        for i, component in enumerate(components):
            if component[np.argmax(np.abs(component))] < 0.0:
                components[i] = -component
        variances = np.clip(eigenvalues[order], 0.0, None)

        result = PcaResult(mean, components, variances, float(np.trace(covariance)))
        return result, centered @ components.T

    # ==========================
    # ANNOTATION
    # ==========================

    @staticmethod
    def annotate_projections(projections, matrix, samples_per_day=0,
                             days_per_week=config.DEFAULT_DAYS_PER_WEEK):
        """
        Per-row hour bucket (3-hour bins), weekend flag and day, plus the radius
        of the first three projection coordinates.

        A positive samples_per_day counts days from the window end index
        (day 1 = first day, weekend = day index mod days_per_week >= 5).
        Otherwise the UTC calendar of the row timestamps is used
        (day = day of month).
        """
        projections = np.asarray(projections, dtype=np.float64)
        radius = np.linalg.norm(projections[:, :len(PROJECTION_AXES)], axis=1)

        if samples_per_day and samples_per_day > 0:
            t = matrix.end_indices
            day_index = t // samples_per_day
            hour_bucket = (t % samples_per_day) * config.HOUR_BUCKETS // samples_per_day
            weekend = (day_index % days_per_week) >= WEEKEND_START
            day = day_index + 1
        elif matrix.timestamps is not None:
            moments = [datetime.fromtimestamp(int(ts), tz=tz.tzutc()) for ts in matrix.timestamps]
            hour_bucket = np.array([m.hour // HOURS_PER_BUCKET for m in moments], dtype=np.int64)
            weekend = np.array([m.weekday() >= WEEKEND_START for m in moments], dtype=bool)
            day = np.array([m.day for m in moments], dtype=np.int64)
        else:
            raise ConfigError("Index-only series need samples_per_day to annotate projections")

        return [
            {
                'series_id': matrix.series_ids[i],
                't': int(matrix.end_indices[i]),
                'timestamp': None if matrix.timestamps is None else int(matrix.timestamps[i]),
                'hour_bucket': int(hour_bucket[i]),
                'weekend': int(weekend[i]),
                'day': int(day[i]),
                'radius': float(radius[i]),
            }
            for i in range(projections.shape[0])
        ]

    def projection_table(self, projections, matrix, annotations=None, samples_per_day=0,
                         days_per_week=config.DEFAULT_DAYS_PER_WEEK):
        """Projection CSV frame; coordinates beyond k are left empty"""
        projections = np.asarray(projections, dtype=np.float64)
        if annotations is None:
            annotations = self.annotate_projections(projections, matrix, samples_per_day, days_per_week)
        frame = pd.DataFrame(annotations)
        if frame.empty:
            frame = pd.DataFrame(columns=[c for c in PROJECTION_COLUMNS if c not in PROJECTION_AXES])
        for axis, name in enumerate(PROJECTION_AXES):
            frame[name] = projections[:, axis] if axis < projections.shape[1] else np.nan
        frame['timestamp'] = frame['timestamp'].astype("Int64")
        return frame[PROJECTION_COLUMNS]


# Global latent service instance
latent_service = LatentService()


def encode_dataset(model, window_sets):
    return latent_service.encode_dataset(model, window_sets)


def pca_project(matrix, k=config.DEFAULT_PCA_COMPONENTS):
    return latent_service.pca_project(matrix, k)
