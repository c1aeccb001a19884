"""
Training Service - Mini-batch ELBO optimisation over pooled multi-series windows
"""
import logging
import os

import numpy as np

import config
from engine.network import forward_backward, window_losses
from engine.optimizer import OptimizerState, adam_step
from models.normalizer import Normalizer
from models.training import TrainingHistory
from services.window_service import window_service
from storage.csv_store import csv_store
from storage.model_store import model_store
from utils.constants import HISTORY_FILE, MODEL_FILE
from utils.errors import ConfigError, NumericError, TooShortError
from utils.formatters import Formatter
from utils.validators import Validator

logger = logging.getLogger(__name__)


class WindowPool:
    """Stacked (n, T) windows plus the series id owning each row"""

    def __init__(self, windows, owners):
        self.windows = windows
        self.owners = owners

    def __len__(self):
        return self.windows.shape[0]


class TrainingService:
    """Service for fitting FAE models"""

    # ==========================
    # DATASET PREPARATION
    # ==========================

    @staticmethod
    def resolve_splits(dataset, train_config):
        """Give records without an explicit split the configured fractions"""
        resolved = []
        for series in dataset:
            if series.split is None:
                series = series.with_split(series.partition_bounds(train_config.train_frac, train_config.val_frac))
            resolved.append(series)
        return resolved

    @staticmethod
    def _pool(normalized, window, stride, segment):
        """Windows ending inside the requested segment of every series"""
        blocks, owners = [], []
        for series in normalized:
            train_end, val_end = series.partition_bounds()
            first_end, last_end = (None, train_end - 1) if segment == 'train' else (train_end, val_end - 1)
            if last_end < (first_end or 0):
                continue
            windows = window_service.make_windows(series, window, stride, first_end, last_end)
            if len(windows) == 0:
                continue
            blocks.append(windows.windows)
            owners.extend([series.series_id] * len(windows))
        if not blocks:
            return WindowPool(np.empty((0, window)), np.empty(0, dtype=object))
        return WindowPool(np.concatenate(blocks, axis=0), np.asarray(owners, dtype=object))

    def prepare(self, model, dataset, train_config):
        """(normalizer, train pool, validation pool) for a dataset"""
        if not dataset:
            raise ConfigError("Training dataset is empty")
        dataset = self.resolve_splits(dataset, train_config)
        normalizer = Normalizer.fit(dataset)
        normalized = [normalizer.apply_record(series) for series in dataset]

        window = model.hyper.window
        train_pool = self._pool(normalized, window, train_config.stride_train, 'train')
        for series in normalized:
            if series.series_id not in set(train_pool.owners):
                logger.warning("Series %s yields no training windows for T=%d; excluded",
                               series.series_id, window)
        if len(train_pool) == 0:
            raise TooShortError(f"No series yields a training window of length T={window}")

        val_pool = self._pool(normalized, window, train_config.stride_train, 'val')
        if len(val_pool) == 0:
            logger.warning("No validation windows; validation loss falls back to the training windows")
            val_pool = train_pool
        return normalizer, train_pool, val_pool

    # ==========================
    # LOSS EVALUATION
    # ==========================

    @staticmethod
    def evaluate_loss(model, windows, beta=None, chunk_size=config.EVAL_CHUNK_SIZE):
        """Mean per-window loss with epsilon = 0"""
        if windows.shape[0] == 0:
            raise ConfigError("Cannot evaluate a loss over zero windows")
        total = 0.0
        for start in range(0, windows.shape[0], chunk_size):
            batch = windows[start:start + chunk_size, np.newaxis, :]
            total += float(window_losses(model, batch, None, beta).sum())
        return total / windows.shape[0]

    @staticmethod
    def _offending_series(model, batch, epsilon, beta, owners):
        try:
            losses = window_losses(model, batch, epsilon, beta)
        except NumericError:
            return sorted(set(owners))
        bad = ~np.isfinite(losses)
        return sorted(set(owners[bad])) if bad.any() else sorted(set(owners))

    # ==========================
    # TRAINING LOOP
    # ==========================

    def train(self, model, dataset, train_config):
        """
        Fit the model; returns (model holding the best-validation weights, history).

        The model is not modified. Normalizer statistics of the training
        partitions are attached to the returned model.
        """
        normalizer, train_pool, val_pool = self.prepare(model, dataset, train_config)
        model = model.with_normalizer(normalizer)
        beta = train_config.beta
        rng = np.random.default_rng(train_config.seed)
        latent_dim = model.hyper.latent_dim

        history = TrainingHistory()
        history.record(0, self.evaluate_loss(model, train_pool.windows, beta),
                       self.evaluate_loss(model, val_pool.windows, beta))
        best_loss, best_model, stale = history.val_loss[0], model, 0
        logger.info("Training %r on %d windows (%d validation); initial val loss %s",
                    model.hyper, len(train_pool), len(val_pool), Formatter.format_loss(best_loss))
        self._checkpoint(best_model, history, train_config.output_dir)

        weights = model.weights()
        state = OptimizerState.for_weights(weights)
        for epoch in range(1, train_config.max_epochs + 1):
            order = rng.permutation(len(train_pool))
            epoch_total = 0.0
            for batch_index, start in enumerate(range(0, order.size, train_config.m)):
                rows = order[start:start + train_config.m]
                batch = train_pool.windows[rows, np.newaxis, :]
                epsilon = rng.standard_normal((rows.size, latent_dim))
                try:
                    loss, grads = forward_backward(model, batch, epsilon, beta)
                    if not all(Validator.all_finite(g) for g in grads.values()):
                        raise NumericError("non-finite gradient")
                except NumericError as e:
                    offenders = self._offending_series(model, batch, epsilon, beta, train_pool.owners[rows])
                    raise NumericError(f"Training diverged at epoch {epoch}, batch {batch_index} "
                                       f"(series {', '.join(offenders)}): {e}") from e
                weights, state = adam_step(weights, grads, state, train_config.gamma)
                model = model.with_weights(weights)
                epoch_total += loss * rows.size
                logger.debug("epoch %d batch %d loss %s", epoch, batch_index, Formatter.format_loss(loss))

            val_loss = self.evaluate_loss(model, val_pool.windows, beta)
            history.record(epoch, epoch_total / len(train_pool), val_loss)
            logger.info("Epoch %d: train %s val %s", epoch, Formatter.format_loss(history.train_loss[-1]),
                        Formatter.format_loss(val_loss))

            if val_loss < best_loss:
                best_loss, best_model, stale = val_loss, model, 0
                self._checkpoint(best_model, history, train_config.output_dir)
            else:
                stale += 1
                if stale >= train_config.patience:
                    history.stopped_early = True
                    logger.info("Early stop after epoch %d (best epoch %d)", epoch, history.best_epoch)
                    break

        self._write_history(history, train_config.output_dir)
        return best_model, history

    # ==========================
    # CHECKPOINTS
    # ==========================

    def _checkpoint(self, model, history, output_dir):
        if not output_dir:
            return
        model_store.save_model(model, os.path.join(output_dir, MODEL_FILE))
        self._write_history(history, output_dir)

    @staticmethod
    def _write_history(history, output_dir):
        if output_dir:
            csv_store.write_frame(history.to_frame(), os.path.join(output_dir, HISTORY_FILE))


# Global training service instance
training_service = TrainingService()


def train(model, dataset, train_config):
    return training_service.train(model, dataset, train_config)
