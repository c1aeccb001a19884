"""
Training Models - Optimisation settings and per-epoch loss history
"""
import math

import numpy as np
import pandas as pd

import config
from utils.constants import HISTORY_COLUMNS
from utils.errors import ConfigError
from utils.validators import Validator


class TrainConfig:
    """Settings of one training run (gamma = learning rate, m = mini-batch size)"""

    def __init__(self, gamma=config.DEFAULT_LEARNING_RATE, m=config.DEFAULT_BATCH_SIZE,
                 max_epochs=config.DEFAULT_MAX_EPOCHS, patience=config.DEFAULT_PATIENCE,
                 seed=config.DEFAULT_SEED, beta=config.DEFAULT_BETA,
                 stride_train=config.DEFAULT_STRIDE_TRAIN,
                 train_frac=config.DEFAULT_TRAIN_FRACTION, val_frac=config.DEFAULT_VAL_FRACTION,
                 output_dir=None):
        if not Validator.validate_positive_number(gamma):
            raise ConfigError(f"gamma must be positive, got {gamma}")
        for name, value in (('m', m), ('max_epochs', max_epochs), ('patience', patience),
                            ('stride_train', stride_train)):
            if not Validator.validate_positive_integer(value):
                raise ConfigError(f"{name} must be a positive integer, got {value}")
        if not Validator.validate_positive_number(beta, allow_zero=True):
            raise ConfigError(f"beta must be non-negative, got {beta}")
        if not (Validator.validate_fraction(train_frac) and Validator.validate_fraction(val_frac)) \
                or train_frac + val_frac >= 1.0:
            raise ConfigError(f"Split fractions ({train_frac}, {val_frac}) must lie in (0, 1) and sum below 1")

        self.gamma = float(gamma)
        self.m = int(m)
        self.max_epochs = int(max_epochs)
        self.patience = int(patience)
        self.seed = int(seed)
        self.beta = float(beta)
        self.stride_train = int(stride_train)
        self.train_frac = float(train_frac)
        self.val_frac = float(val_frac)
        self.output_dir = output_dir

    @classmethod
    def for_hyperparams(cls, hyper, **overrides):
        """Config taking gamma, m and beta from a hyperparameter set"""
        settings = {'gamma': hyper.learning_rate, 'm': hyper.batch_size, 'beta': hyper.beta}
        settings.update(overrides)
        return cls(**settings)

    @classmethod
    def from_dict(cls, data):
        if not data:
            return cls()
        return cls(**data)

    def to_dict(self):
        return {
            'gamma': self.gamma,
            'm': self.m,
            'max_epochs': self.max_epochs,
            'patience': self.patience,
            'seed': self.seed,
            'beta': self.beta,
            'stride_train': self.stride_train,
            'train_frac': self.train_frac,
            'val_frac': self.val_frac,
            'output_dir': self.output_dir,
        }

    def replace(self, **changes):
        settings = self.to_dict()
        settings.update(changes)
        return TrainConfig(**settings)

    def __repr__(self):
        return (f"<TrainConfig(gamma={self.gamma}, m={self.m}, max_epochs={self.max_epochs}, "
                f"patience={self.patience}, seed={self.seed})>")


class TrainingHistory:
    """
    Per-epoch mean losses. Epoch 0 is the evaluation of the initial weights
    with epsilon = 0; later train losses average the sampled-epsilon batch losses.
    """

    def __init__(self):
        self.epochs = []
        self.train_loss = []
        self.val_loss = []
        self.stopped_early = False

    def record(self, epoch, train_loss, val_loss):
        self.epochs.append(int(epoch))
        self.train_loss.append(float(train_loss))
        self.val_loss.append(float(val_loss))

    @property
    def best_epoch(self):
        if not self.val_loss:
            return None
        return self.epochs[int(np.argmin(self.val_loss))]

    @property
    def best_val_loss(self):
        if not self.val_loss:
            return math.inf
        return float(min(self.val_loss))

    @property
    def last_epoch(self):
        return self.epochs[-1] if self.epochs else None

    def to_frame(self):
        return pd.DataFrame({
            'epoch': np.asarray(self.epochs, dtype=np.int64),
            'train_loss': np.asarray(self.train_loss, dtype=np.float64),
            'val_loss': np.asarray(self.val_loss, dtype=np.float64),
        }, columns=HISTORY_COLUMNS)

    def to_dict(self):
        return {
            'epochs': list(self.epochs),
            'train_loss': list(self.train_loss),
            'val_loss': list(self.val_loss),
            'best_epoch': self.best_epoch,
            'stopped_early': self.stopped_early,
        }

    def __len__(self):
        return len(self.epochs)

    def __repr__(self):
        return (f"<TrainingHistory(epochs={len(self)}, best_epoch={self.best_epoch}, "
                f"stopped_early={self.stopped_early})>")
