"""
Run Config Model - Documented key=value schema for command runs
"""
import logging

import config
from models.hyperparams import FaeHyperparams
from models.search_space import SearchSpace
from models.training import TrainConfig
from utils.constants import GAP_POLICIES
from utils.errors import ConfigError
from utils.key_values import read_key_value_file, parse_override

logger = logging.getLogger(__name__)

TYPE_NAMES = {str: "string", int: "integer", float: "number", list: "comma-separated integers"}

# key -> (type, default)
SCHEMA = {
    'output_dir': (str, config.DEFAULT_OUTPUT_DIR),
    'data_csv': (str, ""),
    'data_ucr': (str, ""),
    'synth_spec': (str, ""),
    'csv_timestamp': (str, "timestamp"),
    'csv_series_id': (str, "series_id"),
    'csv_value': (str, "value"),
    'csv_label': (str, "label"),
    'gap_policy': (str, config.DEFAULT_GAP_POLICY),
    'model_path': (str, ""),
    'T': (int, config.DEFAULT_WINDOW_LENGTH),
    'J': (int, config.DEFAULT_LATENT_DIM),
    'U': (int, config.DEFAULT_HIDDEN_FILTERS),
    'F': (int, config.DEFAULT_FILTER_LENGTH),
    'beta': (float, config.DEFAULT_BETA),
    'learning_rate': (float, config.DEFAULT_LEARNING_RATE),
    'batch_size': (int, config.DEFAULT_BATCH_SIZE),
    'max_epochs': (int, config.DEFAULT_MAX_EPOCHS),
    'patience': (int, config.DEFAULT_PATIENCE),
    'seed': (int, config.DEFAULT_SEED),
    'stride_train': (int, config.DEFAULT_STRIDE_TRAIN),
    'train_frac': (float, config.DEFAULT_TRAIN_FRACTION),
    'val_frac': (float, config.DEFAULT_VAL_FRACTION),
    'alpha': (int, config.DEFAULT_ALPHA),
    'alpha_grid': (list, list(config.DEFAULT_ALPHA_GRID)),
    'search_budget': (int, config.DEFAULT_SEARCH_BUDGET),
    'search_epochs': (int, config.DEFAULT_SEARCH_EPOCHS),
    'leave_out': (str, ""),
    'pca_components': (int, config.DEFAULT_PCA_COMPONENTS),
    'samples_per_day': (int, 0),
    'days_per_week': (int, config.DEFAULT_DAYS_PER_WEEK),
}


def coerce_value(key, raw):
    """Typed value for a schema key from its raw text"""
    if key not in SCHEMA:
        raise ConfigError(f"Unknown config key '{key}'")
    kind = SCHEMA[key][0]
    if not isinstance(raw, str):
        return raw
    try:
        if kind is str:
            return raw
        if kind is int:
            return int(raw)
        if kind is float:
            return float(raw)
        return [int(item) for item in raw.split(',') if item.strip()]
    except ValueError as e:
        raise ConfigError(f"Config key '{key}' expects {TYPE_NAMES[kind]}, got {raw!r}") from e


class RunConfig:
    """Effective settings: schema defaults, then file values, then overrides"""

    def __init__(self, values=None):
        self.values = {key: (list(default) if isinstance(default, list) else default)
                       for key, (_, default) in SCHEMA.items()}
        for key, raw in (values or {}).items():
            self.values[key] = coerce_value(key, raw)
        if self.values['gap_policy'] not in GAP_POLICIES:
            raise ConfigError(f"gap_policy must be one of {GAP_POLICIES}, got {self.values['gap_policy']!r}")

    @classmethod
    def from_dict(cls, data):
        return cls(data)

    def to_dict(self):
        return dict(self.values)

    def __getitem__(self, key):
        if key not in self.values:
            raise ConfigError(f"Unknown config key '{key}'")
        return self.values[key]

    def get(self, key, default=None):
        return self.values.get(key, default)

    # ==========================
    # DERIVED SETTINGS
    # ==========================

    def hyperparams(self):
        return FaeHyperparams(
            window=self['T'], latent_dim=self['J'], filters=self['U'], kernel=self['F'],
            learning_rate=self['learning_rate'], batch_size=self['batch_size'],
            alpha=self['alpha'], beta=self['beta'],
        )

    def train_config(self, output_dir=None, **overrides):
        settings = {
            'gamma': self['learning_rate'],
            'm': self['batch_size'],
            'max_epochs': self['max_epochs'],
            'patience': self['patience'],
            'seed': self['seed'],
            'beta': self['beta'],
            'stride_train': self['stride_train'],
            'train_frac': self['train_frac'],
            'val_frac': self['val_frac'],
            'output_dir': output_dir,
        }
        settings.update(overrides)
        return TrainConfig(**settings)

    def search_space(self):
        return SearchSpace(budget=self['search_budget'], kernel=self['F'], beta=self['beta'])

    def csv_schema(self):
        return {
            'timestamp': self['csv_timestamp'],
            'series_id': self['csv_series_id'],
            'value': self['csv_value'],
            'label': self['csv_label'],
        }

    def leave_out_groups(self):
        """`a,b;c` -> [['a', 'b'], ['c']]; an empty group trains on everything"""
        text = self['leave_out']
        if not text.strip():
            return [[]]
        return [[item.strip() for item in group.split(',') if item.strip()] for group in text.split(';')]

    def __repr__(self):
        changed = {k: v for k, v in self.values.items() if v != SCHEMA[k][1]}
        return f"<RunConfig({changed})>"


def parse_config(path=None, overrides=None):
    """RunConfig from an optional key=value file plus `key=value` override strings"""
    values = read_key_value_file(path) if path else {}
    for key in values:
        if key not in SCHEMA:
            raise ConfigError(f"Unknown config key '{key}' in {path}")
    for item in overrides or []:
        key, value = parse_override(item)
        if key not in SCHEMA:
            raise ConfigError(f"Unknown config key '{key}' in override")
        values[key] = value
    run_config = RunConfig(values)
    logger.debug("Effective config: %r", run_config)
    return run_config
