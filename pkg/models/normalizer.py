"""
Normalizer Model - Per-series z-score statistics fit on training partitions
"""
import logging

import numpy as np

import config
from utils.errors import DataError

logger = logging.getLogger(__name__)


class Normalizer:
    """Per-series (mean, std) pairs; std uses the population formula"""

    def __init__(self, stats=None, flagged=None):
        self.stats = dict(stats or {})
        self.flagged = set(flagged or ())

    @staticmethod
    def compute_stats(values):
        """Two-pass population mean/std; returns (mean, std, floored)"""
        values = np.asarray(values, dtype=np.float64)
        if values.size == 0:
            raise DataError("Cannot fit normalizer statistics on an empty partition")
        mean = float(values.sum() / values.size)
        std = float(np.sqrt(((values - mean) ** 2).sum() / values.size))
        if std < config.NORMALIZER_STD_FLOOR:
            return mean, config.NORMALIZER_STD_FLOOR, True
        return mean, std, False

    @classmethod
    def fit(cls, series_list):
        """Fit statistics on each series' training partition"""
        normalizer = cls()
        for series in series_list:
            normalizer.add_series(series)
        return normalizer

    def add_series(self, series):
        mean, std, floored = self.compute_stats(series.train_values())
        self.stats[series.series_id] = (mean, std)
        if floored:
            self.flagged.add(series.series_id)
            logger.warning("Series %s has a constant training partition; std floored at %g",
                           series.series_id, config.NORMALIZER_STD_FLOOR)
        return mean, std

    @classmethod
    def fallback_for(cls, series):
        """Statistics-only normalizer fit on an unseen series' own training partition"""
        normalizer = cls()
        normalizer.add_series(series)
        return normalizer

    @classmethod
    def unit(cls, series_ids):
        """Identity normalizer (mean 0, std 1) for the given ids"""
        return cls({series_id: (0.0, 1.0) for series_id in series_ids})

    def has(self, series_id):
        return series_id in self.stats

    def is_flagged(self, series_id):
        return series_id in self.flagged

    def get(self, series_id):
        if series_id not in self.stats:
            raise DataError(f"No normalizer statistics for series '{series_id}'")
        return self.stats[series_id]

    def apply(self, series_id, values):
        mean, std = self.get(series_id)
        return (np.asarray(values, dtype=np.float64) - mean) / std

    def invert(self, series_id, values):
        mean, std = self.get(series_id)
        return np.asarray(values, dtype=np.float64) * std + mean

    def apply_record(self, series):
        """Normalized copy of a SeriesRecord"""
        return series.with_values(self.apply(series.series_id, series.values))

    def merged(self, other):
        """New normalizer holding both sets of statistics (other wins on conflicts)"""
        merged = Normalizer(self.stats, self.flagged)
        merged.stats.update(other.stats)
        merged.flagged.update(other.flagged)
        return merged

    def to_dict(self):
        return {series_id: self.stats[series_id] for series_id in sorted(self.stats)}

    def __len__(self):
        return len(self.stats)

    def __eq__(self, other):
        return isinstance(other, Normalizer) and self.stats == other.stats

    def __repr__(self):
        return f"<Normalizer(series={sorted(self.stats)})>"


def fit_normalizer(series_list):
    """Per-series z-score statistics over each training partition"""
    return Normalizer.fit(series_list)
