"""
Detection Service - Online alpha-sigma scoring, alpha calibration and point-wise evaluation
"""
import logging

import numpy as np

import config
from engine.network import encode, decode, reconstruct
from models.normalizer import Normalizer
from models.results import DetectionResult, EvalReport, AlphaCalibration
from services.window_service import window_service
from utils.errors import ShapeError, TooShortError

logger = logging.getLogger(__name__)

HALF_LOG_TWO_PI = 0.5 * np.log(2.0 * np.pi)


def _gaussian_nll(x, mu, sigma):
    return HALF_LOG_TWO_PI + np.log(sigma) + (x - mu) ** 2 / (2.0 * sigma ** 2)


class DetectionService:
    """Service for scoring series against a trained model"""

    # ==========================
    # NORMALIZATION
    # ==========================

    @staticmethod
    def normalizer_for(model, series):
        """(normalizer, used_fallback) for a series id"""
        if model.normalizer.has(series.series_id):
            return model.normalizer, False
        logger.warning("Series %s is unknown to the model; using statistics of its own training partition",
                       series.series_id)
        return Normalizer.fallback_for(series), True

    # ==========================
    # SCORING
    # ==========================

    def score_online(self, model, series, alpha=config.DEFAULT_ALPHA, first_end=None, last_end=None,
                     chunk_size=config.EVAL_CHUNK_SIZE):
        """
        Score every arrival t in [T-1, L-1] (optionally narrowed to
        [first_end, last_end]) from position T-1 of the reconstruction of the
        window ending at t.
        """
        window = model.hyper.window
        if len(series) < window:
            raise TooShortError(f"Series {series.series_id} has length {len(series)} < T={window}")
        normalizer, fallback = self.normalizer_for(model, series)
        mean, std = normalizer.get(series.series_id)
        normalized = normalizer.apply_record(series)
        windows = window_service.make_windows(normalized, window, 1, first_end, last_end)
        if len(windows) == 0:
            return DetectionResult.empty(series.series_id, alpha)

        mu_n = np.empty(len(windows))
        sigma_n = np.empty(len(windows))
        for start in range(0, len(windows), chunk_size):
            batch = windows.windows[start:start + chunk_size, np.newaxis, :]
            mu_z, _ = encode(model, batch)
            mu_x, sigma_x = decode(model, mu_z)
            mu_n[start:start + batch.shape[0]] = mu_x[:, 0, -1]
            sigma_n[start:start + batch.shape[0]] = sigma_x[:, 0, -1]

        sigma_n = np.maximum(sigma_n, config.SIGMA_FLOOR)
        x_n = normalized.values[windows.ends]
        score = np.abs(x_n - mu_n) / sigma_n
        return DetectionResult(
            series.series_id, windows.ends, series.values[windows.ends],
            mu_n * std + mean, sigma_n * std, score, alpha,
            timestamps=windows.timestamps, nll=_gaussian_nll(x_n, mu_n, sigma_n),
            fallback_normalizer=fallback,
        )

    def reconstruct_offline(self, model, series, alpha=config.DEFAULT_ALPHA):
        """
        Score every position from full-window reconstructions of consecutive
        non-overlapping windows; the last window is aligned to the series end.
        """
        window = model.hyper.window
        length = len(series)
        if length < window:
            raise TooShortError(f"Series {series.series_id} has length {length} < T={window}")
        normalizer, fallback = self.normalizer_for(model, series)
        mean, std = normalizer.get(series.series_id)
        x_n = normalizer.apply(series.series_id, series.values)

        ends = list(range(window - 1, length, window))
        if ends[-1] != length - 1:
            ends.append(length - 1)
        mu_n = np.empty(length)
        sigma_n = np.empty(length)
        covered = 0
        for end in ends:
            start = end - window + 1
            mu_x, sigma_x = reconstruct(model, x_n[start:end + 1][np.newaxis, :])
            mu_n[covered:end + 1] = mu_x[0, covered - start:]
            sigma_n[covered:end + 1] = sigma_x[0, covered - start:]
            covered = end + 1

        sigma_n = np.maximum(sigma_n, config.SIGMA_FLOOR)
        score = np.abs(x_n - mu_n) / sigma_n
        return DetectionResult(
            series.series_id, np.arange(length), series.values, mu_n * std + mean, sigma_n * std,
            score, alpha, timestamps=series.timestamps, nll=_gaussian_nll(x_n, mu_n, sigma_n),
            fallback_normalizer=fallback,
        )

    # ==========================
    # EVALUATION
    # ==========================

    @staticmethod
    def evaluate_pointwise(flags, labels, series_id=None):
        flags = np.asarray(flags)
        labels = np.asarray(labels)
        if flags.shape != labels.shape:
            raise ShapeError(f"{flags.size} flags for {labels.size} labels")
        flags = flags.astype(bool)
        labels = labels.astype(bool)
        return EvalReport(
            tp=np.count_nonzero(flags & labels),
            fp=np.count_nonzero(flags & ~labels),
            fn=np.count_nonzero(~flags & labels),
            tn=np.count_nonzero(~flags & ~labels),
            series_id=series_id,
        )

    def select_alpha(self, scores, labels, alpha_grid=config.DEFAULT_ALPHA_GRID,
                     alpha_default=config.DEFAULT_ALPHA, series_id=None):
        """Grid alpha with the best F1; ties go to the larger alpha"""
        scores = np.asarray(scores, dtype=np.float64)
        labels = np.asarray(labels)
        if scores.shape != labels.shape:
            raise ShapeError(f"{scores.size} scores for {labels.size} labels")
        if not np.any(labels):
            logger.warning("Series %s has no positive validation labels; alpha stays at %s",
                           series_id, alpha_default)
            return AlphaCalibration(series_id, alpha_default, False)

        best_alpha, best_f1 = None, -1.0
        for alpha in sorted(alpha_grid):
            f1 = self.evaluate_pointwise(scores > alpha, labels).f1
            if f1 >= best_f1:
                best_alpha, best_f1 = alpha, f1
        return AlphaCalibration(series_id, best_alpha, True, best_f1)

    def calibrate_alpha(self, model, series_list, alpha_grid=config.DEFAULT_ALPHA_GRID,
                        alpha_default=config.DEFAULT_ALPHA):
        """Per-series alpha chosen on the validation partition; {series_id: AlphaCalibration}"""
        calibrations = {}
        for series in series_list:
            train_end, val_end = series.partition_bounds()
            if not series.has_labels or val_end <= max(train_end, model.hyper.window - 1) \
                    or len(series) < model.hyper.window:
                logger.warning("Series %s has no labeled validation windows; alpha stays at %s",
                               series.series_id, alpha_default)
                calibrations[series.series_id] = AlphaCalibration(series.series_id, alpha_default, False)
                continue
            result = self.score_online(model, series, alpha_default, train_end, val_end - 1)
            calibrations[series.series_id] = self.select_alpha(
                result.score, series.labels[result.t], alpha_grid, alpha_default, series.series_id)
        return calibrations

    def evaluate_series(self, model, series, alpha, first_end=None, last_end=None):
        """(DetectionResult, EvalReport) over the scored region [first_end, last_end]"""
        result = self.score_online(model, series, alpha, first_end, last_end)
        report = self.evaluate_pointwise(result.flag, series.label_array()[result.t], series.series_id)
        return result, report


# Global detection service instance
detection_service = DetectionService()


def score_online(model, series, alpha=config.DEFAULT_ALPHA):
    return detection_service.score_online(model, series, alpha)


def evaluate_pointwise(flags, labels):
    return detection_service.evaluate_pointwise(flags, labels)
