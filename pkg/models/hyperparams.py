"""
Hyperparameters Model - Window/latent sizes and the depth rule they imply
"""
import config
from utils.errors import HyperparameterError
from utils.validators import Validator


def derive_depth(window, kernel):
    """Smallest N >= 1 with window <= 2 * kernel**(N-1)"""
    if not Validator.validate_positive_integer(kernel) or int(kernel) < 2:
        raise HyperparameterError(f"Filter length must be an integer >= 2, got {kernel}")
    if not Validator.validate_positive_integer(window):
        raise HyperparameterError(f"Window length must be a positive integer, got {window}")

    depth = 1
    while int(window) > 2 * int(kernel) ** (depth - 1):
        depth += 1
    return depth


class FaeHyperparams:
    """Architecture and optimisation hyperparameters of one FAE model"""

    def __init__(self, window=config.DEFAULT_WINDOW_LENGTH, latent_dim=config.DEFAULT_LATENT_DIM,
                 filters=config.DEFAULT_HIDDEN_FILTERS, kernel=config.DEFAULT_FILTER_LENGTH,
                 learning_rate=config.DEFAULT_LEARNING_RATE, batch_size=config.DEFAULT_BATCH_SIZE,
                 alpha=config.DEFAULT_ALPHA, beta=config.DEFAULT_BETA):
        for name, value in (('window', window), ('latent_dim', latent_dim), ('filters', filters),
                            ('batch_size', batch_size), ('alpha', alpha)):
            if not Validator.validate_positive_integer(value):
                raise HyperparameterError(f"{name} must be a positive integer, got {value}")
        if not Validator.validate_positive_number(learning_rate):
            raise HyperparameterError(f"learning_rate must be positive, got {learning_rate}")
        if not Validator.validate_positive_number(beta, allow_zero=True):
            raise HyperparameterError(f"beta must be non-negative, got {beta}")
        if int(latent_dim) >= int(window):
            raise HyperparameterError(f"Latent dimension J={latent_dim} must be smaller than window T={window}")

        self.window = int(window)
        self.latent_dim = int(latent_dim)
        self.filters = int(filters)
        self.kernel = int(kernel)
        self.depth = derive_depth(self.window, self.kernel)
        self.learning_rate = float(learning_rate)
        self.batch_size = int(batch_size)
        self.alpha = int(alpha)
        self.beta = float(beta)

    @classmethod
    def from_dict(cls, data):
        """Create hyperparameters from a dictionary using the short (T, J, U, F) keys"""
        if not data:
            return cls()
        return cls(
            window=data.get('T', config.DEFAULT_WINDOW_LENGTH),
            latent_dim=data.get('J', config.DEFAULT_LATENT_DIM),
            filters=data.get('U', config.DEFAULT_HIDDEN_FILTERS),
            kernel=data.get('F', config.DEFAULT_FILTER_LENGTH),
            learning_rate=data.get('learning_rate', config.DEFAULT_LEARNING_RATE),
            batch_size=data.get('batch_size', config.DEFAULT_BATCH_SIZE),
            alpha=data.get('alpha', config.DEFAULT_ALPHA),
            beta=data.get('beta', config.DEFAULT_BETA),
        )

    def to_dict(self):
        return {
            'T': self.window,
            'J': self.latent_dim,
            'U': self.filters,
            'F': self.kernel,
            'N': self.depth,
            'learning_rate': self.learning_rate,
            'batch_size': self.batch_size,
            'alpha': self.alpha,
            'beta': self.beta,
        }

    def encoder_dilations(self):
        return [self.kernel ** h for h in range(self.depth)]

    def decoder_dilations(self):
        return [self.kernel ** (self.depth - 1 - h) for h in range(self.depth)]

    def expected_param_count(self):
        """Closed-form count of bias-free weights"""
        U, J, F, N = self.filters, self.latent_dim, self.kernel, self.depth
        encoder = 1 * U * F + (N - 1) * U * U * F + 2 * U * J
        decoder = J * U * F + (N - 1) * U * U * F + 2 * U * 1
        return encoder + decoder

    def __eq__(self, other):
        return isinstance(other, FaeHyperparams) and self.to_dict() == other.to_dict()

    def __repr__(self):
        return (f"<FaeHyperparams(T={self.window}, J={self.latent_dim}, U={self.filters}, "
                f"F={self.kernel}, N={self.depth})>")
