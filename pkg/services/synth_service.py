"""
Synth Service - Seeded seasonal series with weekend scaling, trend, noise and labeled spikes
"""
import logging

import numpy as np

import config
from models.series import SeriesRecord
from utils.errors import ConfigError, DataError
from utils.key_values import read_key_value_file
from utils.validators import Validator

logger = logging.getLogger(__name__)

DAYS_PER_WEEK = 7
WEEKEND_DAYS = (5, 6)
GLOBAL_KEYS = ('length', 'seed', 'step_seconds', 'start_timestamp')


class SeriesComponents:
    """Generator recipe for one synthetic series"""

    FLOAT_FIELDS = ('amplitude', 'weekend_scale', 'trend_per_period', 'noise_std', 'phase', 'level')

    def __init__(self, period, amplitude=1.0, weekend_scale=1.0, trend_per_period=0.0,
                 noise_std=0.0, spikes=None, phase=0.0, level=0.0):
        if not Validator.validate_positive_integer(period) or int(period) < 2:
            raise ConfigError(f"period must be an integer >= 2, got {period}")
        if not Validator.validate_positive_number(noise_std, allow_zero=True):
            raise ConfigError(f"noise_std must be non-negative, got {noise_std}")
        self.period = int(period)
        self.amplitude = float(amplitude)
        self.weekend_scale = float(weekend_scale)
        self.trend_per_period = float(trend_per_period)
        self.noise_std = float(noise_std)
        self.spikes = [(int(t), float(m)) for t, m in (spikes or [])]
        self.phase = float(phase)
        self.level = float(level)

    @staticmethod
    def parse_spikes(text):
        """`t:magnitude;t:magnitude` -> [(t, magnitude), ...]"""
        spikes = []
        for item in filter(None, (part.strip() for part in text.split(';'))):
            position, sep, magnitude = item.partition(':')
            try:
                spikes.append((int(position), float(magnitude)))
            except ValueError as e:
                raise ConfigError(f"Malformed spike {item!r}; expected t:magnitude") from e
            if not sep:
                raise ConfigError(f"Malformed spike {item!r}; expected t:magnitude")
        return spikes

    @classmethod
    def from_dict(cls, data):
        if 'period' not in data:
            raise ConfigError("Synthetic series needs a period")
        kwargs = {'period': data['period']}
        for field, raw in data.items():
            if field == 'period':
                continue
            if field == 'spikes':
                kwargs['spikes'] = raw if isinstance(raw, list) else cls.parse_spikes(raw)
            elif field in cls.FLOAT_FIELDS:
                try:
                    kwargs[field] = float(raw)
                except ValueError as e:
                    raise ConfigError(f"{field} expects a number, got {raw!r}") from e
            else:
                raise ConfigError(f"Unknown synthetic series field '{field}'")
        try:
            kwargs['period'] = int(kwargs['period'])
        except ValueError as e:
            raise ConfigError(f"period expects an integer, got {kwargs['period']!r}") from e
        return cls(**kwargs)

    def to_dict(self):
        return {
            'period': self.period,
            'amplitude': self.amplitude,
            'weekend_scale': self.weekend_scale,
            'trend_per_period': self.trend_per_period,
            'noise_std': self.noise_std,
            'spikes': list(self.spikes),
            'phase': self.phase,
            'level': self.level,
        }

    def __repr__(self):
        return f"<SeriesComponents(period={self.period}, spikes={len(self.spikes)})>"


class SynthService:
    """Service for synthetic series generation"""

    @staticmethod
    def synth_generate(components, length, seed, series_id="synthetic",
                       step_seconds=config.DEFAULT_STEP_SECONDS, start_timestamp=0):
        """
        value(t) = level + amplitude*scale(t)*sin(2*pi*t/period + phase)
                   + trend_per_period*t/period + N(0, noise_std) + spikes

        scale(t) is weekend_scale on days 5 and 6 of every 7-day week, where a
        day spans `period` samples.
        """
        if not Validator.validate_positive_integer(length):
            raise ConfigError(f"length must be a positive integer, got {length}")
        rng = np.random.default_rng(seed)
        t = np.arange(length, dtype=np.float64)
        day = np.arange(length) // components.period
        weekend = np.isin(day % DAYS_PER_WEEK, WEEKEND_DAYS)
        scale = np.where(weekend, components.weekend_scale, 1.0)

        values = (components.level
                  + components.amplitude * scale * np.sin(2.0 * np.pi * t / components.period + components.phase)
                  + components.trend_per_period * (t / components.period)
                  + rng.normal(0.0, components.noise_std, size=length))
        labels = np.zeros(length, dtype=np.int64)
        for position, magnitude in components.spikes:
            if not 0 <= position < length:
                raise DataError(f"Spike position {position} outside series of length {length}")
            values[position] += magnitude
            labels[position] = 1

        timestamps = start_timestamp + step_seconds * np.arange(length, dtype=np.int64)
        return SeriesRecord(series_id, values, timestamps, labels)

    def generate_from_spec(self, entries):
        """Series list from flat entries: global keys plus `<id>.<field>` keys"""
        unknown = [key for key in entries if '.' not in key and key not in GLOBAL_KEYS]
        if unknown:
            raise ConfigError(f"Unknown synthetic spec keys: {unknown}")
        try:
            length = int(entries.get('length', 0))
            seed = int(entries.get('seed', config.DEFAULT_SEED))
            step_seconds = int(entries.get('step_seconds', config.DEFAULT_STEP_SECONDS))
            start_timestamp = int(entries.get('start_timestamp', 0))
        except ValueError as e:
            raise ConfigError(f"Synthetic spec global keys must be integers: {e}") from e

        recipes = {}
        for key, value in entries.items():
            if '.' in key:
                series_id, field = key.split('.', 1)
                recipes.setdefault(series_id, {})[field] = value
        if not recipes:
            raise ConfigError("Synthetic spec defines no series")

        records = []
        for index, (series_id, recipe) in enumerate(recipes.items()):
            components = SeriesComponents.from_dict(recipe)
            records.append(self.synth_generate(components, length, seed + index, series_id,
                                               step_seconds, start_timestamp))
        logger.info("Generated %d synthetic series of length %d", len(records), length)
        return records

    def generate_from_file(self, path):
        return self.generate_from_spec(read_key_value_file(path))


# Global synth service instance
synth_service = SynthService()


def synth_generate(components, length, seed, **kwargs):
    return SynthService.synth_generate(components, length, seed, **kwargs)
