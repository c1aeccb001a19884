"""
Utilities package initialization
"""
from .validators import Validator
from .formatters import Formatter
from .constants import *
from .errors import (
    FaeError, ConfigError, HyperparameterError, DataError, SchemaError,
    TooShortError, FormatError, CorruptionError, NumericError, ShapeError,
    StorageIOError,
)

__all__ = [
    'Validator', 'Formatter', 'FaeError', 'ConfigError', 'HyperparameterError',
    'DataError', 'SchemaError', 'TooShortError', 'FormatError', 'CorruptionError',
    'NumericError', 'ShapeError', 'StorageIOError',
]
