"""
Storage package initialization
"""
from .csv_store import CsvStore, csv_store
from .model_store import ModelStore, model_store, save_model, load_model

__all__ = ['CsvStore', 'csv_store', 'ModelStore', 'model_store', 'save_model', 'load_model']
