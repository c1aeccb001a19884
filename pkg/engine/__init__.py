"""
Engine package initialization
"""
from .layers import ConvParams
from .optimizer import OptimizerState, adam_step

__all__ = ['ConvParams', 'OptimizerState', 'adam_step']
