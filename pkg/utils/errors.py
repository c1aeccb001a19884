"""
Error hierarchy - every domain failure maps to one exit-code family
"""
import config


class FaeError(ValueError):
    """Base class for all toolkit errors"""
    family = "error"
    exit_code = 1


class ConfigError(FaeError):
    family = "config"
    exit_code = config.EXIT_CONFIG


class HyperparameterError(ConfigError):
    """Hyperparameters violate an architecture rule"""


class DataError(FaeError):
    family = "data"
    exit_code = config.EXIT_DATA


class SchemaError(DataError):
    """Input file columns do not match the expected schema"""


class TooShortError(DataError):
    """Series is shorter than the model window"""


class FormatError(FaeError):
    family = "format"
    exit_code = config.EXIT_FORMAT


class CorruptionError(FormatError):
    """File structure is valid but its payload is damaged"""


class NumericError(FaeError):
    family = "numeric"
    exit_code = config.EXIT_NUMERIC


class ShapeError(NumericError):
    """Array shapes are inconsistent with the operation"""


class StorageIOError(FaeError):
    family = "io"
    exit_code = config.EXIT_IO
