"""
Search Service - Seeded random search over the hyperparameter grid
"""
import logging
import math
import os

import numpy as np
import pandas as pd

import config
from models.fae_model import FaeModel
from models.training import TrainConfig
from services.training_service import training_service
from storage.csv_store import csv_store
from utils.constants import LEADERBOARD_COLUMNS, LEADERBOARD_FILE
from utils.errors import ConfigError, TooShortError
from utils.formatters import Formatter

logger = logging.getLogger(__name__)


class SearchResult:
    """Best hyperparameters plus the full leaderboard (best first)"""

    def __init__(self, best, leaderboard):
        self.best = best
        self.leaderboard = leaderboard

    def to_frame(self):
        rows = []
        for rank, entry in enumerate(self.leaderboard, start=1):
            hyper = entry['hyper']
            rows.append({
                'rank': rank,
                'T': hyper.window,
                'J': hyper.latent_dim,
                'gamma': hyper.learning_rate,
                'm': hyper.batch_size,
                'U': hyper.filters,
                'val_loss': entry['val_loss'],
                'params': hyper.expected_param_count(),
            })
        return pd.DataFrame(rows, columns=LEADERBOARD_COLUMNS)

    def __repr__(self):
        return f"<SearchResult(best={self.best!r}, trials={len(self.leaderboard)})>"


class SearchService:
    """Service for hyperparameter calibration"""

    def hyperparameter_search(self, space, dataset, budget=None, base_config=None,
                              epochs=config.DEFAULT_SEARCH_EPOCHS, output_dir=None):
        """
        Sample `budget` configurations, train each for at most `epochs` epochs
        and rank them by best validation loss (ties keep sampling order).
        """
        space.validate()
        budget = space.budget if budget is None else int(budget)
        if budget < 1:
            raise ConfigError(f"Search budget must be at least 1, got {budget}")
        if not dataset:
            raise ConfigError("Search dataset is empty")
        base_config = base_config.replace(output_dir=None) if base_config is not None else None
        seed = config.DEFAULT_SEED if base_config is None else base_config.seed
        rng = np.random.default_rng(seed)

        trials = []
        for trial in range(budget):
            hyper = space.sample(rng)
            trial_config = self._trial_config(hyper, base_config, epochs, seed + trial)
            try:
                _, history = training_service.train(FaeModel.build(hyper, seed + trial), dataset, trial_config)
                val_loss = history.best_val_loss
            except TooShortError as e:
                logger.warning("Trial %d %r skipped: %s", trial, hyper, e)
                val_loss = math.inf
            logger.info("Trial %d/%d %r: best val loss %s", trial + 1, budget, hyper,
                        Formatter.format_loss(val_loss))
            trials.append({'trial': trial, 'hyper': hyper, 'val_loss': val_loss})

        if all(math.isinf(entry['val_loss']) for entry in trials):
            raise TooShortError("Every sampled window length exceeds the available series")
        leaderboard = sorted(trials, key=lambda entry: (entry['val_loss'], entry['trial']))
        result = SearchResult(leaderboard[0]['hyper'], leaderboard)
        if output_dir:
            csv_store.write_frame(result.to_frame(), os.path.join(output_dir, LEADERBOARD_FILE))
        return result

    @staticmethod
    def _trial_config(hyper, base_config, epochs, seed):
        if base_config is None:
            return TrainConfig.for_hyperparams(hyper, max_epochs=epochs, seed=seed)
        return base_config.replace(gamma=hyper.learning_rate, m=hyper.batch_size,
                                   max_epochs=epochs, seed=seed)


# Global search service instance
search_service = SearchService()


def hyperparameter_search(space, dataset, budget=None, **kwargs):
    return search_service.hyperparameter_search(space, dataset, budget, **kwargs)
