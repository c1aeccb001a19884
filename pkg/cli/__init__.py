"""
CLI package initialization
"""
from .commands import CommandDispatcher, dispatch, emit_plot_csv

__all__ = ['CommandDispatcher', 'dispatch', 'emit_plot_csv']
