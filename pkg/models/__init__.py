"""
Models package initialization
"""
from .hyperparams import FaeHyperparams, derive_depth
from .fae_model import FaeModel, build_model, param_count
from .normalizer import Normalizer, fit_normalizer
from .series import SeriesRecord, WindowSample, WindowSet, SeriesSplit
from .latent import LatentSample, LatentMatrix, PcaResult
from .training import TrainConfig, TrainingHistory
from .search_space import SearchSpace
from .results import DetectionResult, EvalReport, AlphaCalibration, ZeroShotEntry, ZeroShotReport
from .run_config import RunConfig, parse_config

__all__ = [
    'FaeHyperparams', 'derive_depth', 'FaeModel', 'build_model', 'param_count',
    'Normalizer', 'fit_normalizer', 'SeriesRecord', 'WindowSample', 'WindowSet', 'SeriesSplit',
    'LatentSample', 'LatentMatrix', 'PcaResult', 'TrainConfig', 'TrainingHistory', 'SearchSpace',
    'DetectionResult', 'EvalReport', 'AlphaCalibration', 'ZeroShotEntry', 'ZeroShotReport',
    'RunConfig', 'parse_config',
]
