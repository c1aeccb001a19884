"""
Services package initialization
"""
from .window_service import WindowService, window_service
from .ingest_service import IngestService, ingest_service
from .synth_service import SynthService, synth_service
from .training_service import TrainingService, training_service
from .search_service import SearchService, search_service
from .detection_service import DetectionService, detection_service
from .zero_shot_service import ZeroShotService, zero_shot_service
from .latent_service import LatentService, latent_service

__all__ = [
    'WindowService', 'IngestService', 'SynthService', 'TrainingService', 'SearchService',
    'DetectionService', 'ZeroShotService', 'LatentService',
    'window_service', 'ingest_service', 'synth_service', 'training_service', 'search_service',
    'detection_service', 'zero_shot_service', 'latent_service',
]
