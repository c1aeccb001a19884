"""
Latent Models - Reparameterization record, encoded window matrix and PCA result
"""
import numpy as np

from utils.errors import ShapeError


class LatentSample:
    """(mu_z, logsigma_z, epsilon, z) for one encoded window"""

    def __init__(self, mu_z, logsigma_z, epsilon, z):
        self.mu_z = mu_z
        self.logsigma_z = logsigma_z
        self.epsilon = epsilon
        self.z = z

    def to_dict(self):
        return {
            'mu_z': self.mu_z.tolist(),
            'logsigma_z': self.logsigma_z.tolist(),
            'epsilon': self.epsilon.tolist(),
            'z': self.z.tolist(),
        }

    def __repr__(self):
        return f"<LatentSample(J={self.z.shape[-1]})>"


class LatentMatrix:
    """One mu_z row per window plus its series id, end index and end timestamp"""

    def __init__(self, rows, series_ids, end_indices, timestamps=None):
        rows = np.asarray(rows, dtype=np.float64)
        if rows.ndim != 2:
            raise ShapeError(f"Latent rows must form a 2-D matrix, got shape {rows.shape}")
        if len(series_ids) != rows.shape[0] or len(end_indices) != rows.shape[0]:
            raise ShapeError("Latent metadata length does not match the row count")
        if timestamps is not None and len(timestamps) != rows.shape[0]:
            raise ShapeError("Latent timestamps length does not match the row count")
        self.rows = rows
        self.series_ids = list(series_ids)
        self.end_indices = np.asarray(end_indices, dtype=np.int64)
        self.timestamps = timestamps

    @property
    def latent_dim(self):
        return self.rows.shape[1]

    def __len__(self):
        return self.rows.shape[0]

    def __repr__(self):
        return f"<LatentMatrix(rows={len(self)}, J={self.latent_dim})>"


class PcaResult:
    """Mean, orthonormal components (k x J) and non-increasing explained variances"""

    def __init__(self, mean, components, explained_variance, total_variance):
        self.mean = mean
        self.components = components
        self.explained_variance = explained_variance
        self.total_variance = total_variance

    @property
    def n_components(self):
        return self.components.shape[0]

    def explained_ratio(self):
        if self.total_variance <= 0.0:
            return np.zeros_like(self.explained_variance)
        return self.explained_variance / self.total_variance

    def transform(self, rows):
        return (np.asarray(rows, dtype=np.float64) - self.mean) @ self.components.T

    def to_dict(self):
        return {
            'mean': self.mean.tolist(),
            'components': self.components.tolist(),
            'explained_variance': self.explained_variance.tolist(),
            'total_variance': self.total_variance,
        }

    def __repr__(self):
        return f"<PcaResult(k={self.n_components}, explained={self.explained_ratio().sum():.4f})>"
