"""
Search Space Model - Hyperparameter grid for calibration runs
"""
import config
from models.hyperparams import FaeHyperparams
from utils.errors import ConfigError


class SearchSpace:
    """
    Stepped ranges for T, J, U and m plus a uniform range for gamma.
    J is drawn from {latent_min, latent_min + step, ..., T/4}.
    """

    def __init__(self, window_range=config.SEARCH_WINDOW_RANGE, latent_min=config.SEARCH_LATENT_MIN,
                 latent_step=config.SEARCH_LATENT_STEP, learning_rate_range=config.SEARCH_LEARNING_RATE_RANGE,
                 batch_range=config.SEARCH_BATCH_RANGE, filter_range=config.SEARCH_FILTER_RANGE,
                 budget=config.DEFAULT_SEARCH_BUDGET, kernel=config.DEFAULT_FILTER_LENGTH,
                 beta=config.DEFAULT_BETA):
        self.window_range = tuple(int(v) for v in window_range)
        self.latent_min = int(latent_min)
        self.latent_step = int(latent_step)
        self.learning_rate_range = tuple(float(v) for v in learning_rate_range)
        self.batch_range = tuple(int(v) for v in batch_range)
        self.filter_range = tuple(int(v) for v in filter_range)
        self.budget = int(budget)
        self.kernel = int(kernel)
        self.beta = float(beta)

    @staticmethod
    def _stepped(value_range):
        low, high, step = value_range
        if step < 1:
            return []
        return list(range(low, high + 1, step))

    def window_values(self):
        """Windows that admit at least one latent size"""
        return [T for T in self._stepped(self.window_range) if self.latent_values(T)]

    def latent_values(self, window):
        if self.latent_step < 1:
            return []
        return [J for J in range(self.latent_min, window // 4 + 1, self.latent_step) if J < window]

    def batch_values(self):
        return self._stepped(self.batch_range)

    def filter_values(self):
        return self._stepped(self.filter_range)

    def validate(self):
        """Raise ConfigError when any dimension of the grid is empty"""
        low, high = self.learning_rate_range
        if not (0.0 < low <= high):
            raise ConfigError(f"Learning-rate range {self.learning_rate_range} is empty or non-positive")
        for name, values in (('T', self.window_values()), ('m', self.batch_values()),
                             ('U', self.filter_values())):
            if not values:
                raise ConfigError(f"Search grid for {name} is empty")
        if self.budget < 1:
            raise ConfigError(f"Search budget must be at least 1, got {self.budget}")
        return self

    def sample(self, rng):
        """One configuration drawn uniformly per dimension"""
        window = int(rng.choice(self.window_values()))
        latent = int(rng.choice(self.latent_values(window)))
        low, high = self.learning_rate_range
        gamma = float(rng.uniform(low, high))
        batch = int(rng.choice(self.batch_values()))
        filters = int(rng.choice(self.filter_values()))
        return FaeHyperparams(window=window, latent_dim=latent, filters=filters, kernel=self.kernel,
                              learning_rate=gamma, batch_size=batch, beta=self.beta)

    def contains(self, hyper):
        low, high = self.learning_rate_range
        return (hyper.window in self.window_values()
                and hyper.latent_dim in self.latent_values(hyper.window)
                and hyper.filters in self.filter_values()
                and hyper.batch_size in self.batch_values()
                and low <= hyper.learning_rate <= high)

    def to_dict(self):
        return {
            'window_range': self.window_range,
            'latent_min': self.latent_min,
            'latent_step': self.latent_step,
            'learning_rate_range': self.learning_rate_range,
            'batch_range': self.batch_range,
            'filter_range': self.filter_range,
            'budget': self.budget,
            'kernel': self.kernel,
        }

    def __repr__(self):
        return f"<SearchSpace(T={self.window_range}, budget={self.budget})>"
