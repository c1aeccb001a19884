"""
Result Models - Detection outputs, point-wise metrics, alpha calibration and zero-shot reports
"""
import math

import numpy as np
import pandas as pd

import config
from utils.constants import SCORE_COLUMNS, ZEROSHOT_COLUMNS, METRICS_COLUMNS, POOLED_ROW_ID
from utils.errors import ShapeError


class DetectionResult:
    """
    Per-timestep scoring output of one series.

    x, mu and sigma are in original units; score and nll are computed in
    normalized units. flag[i] == 1 exactly when score[i] > alpha.
    """

    def __init__(self, series_id, t, x, mu, sigma, score, alpha, timestamps=None, nll=None,
                 fallback_normalizer=False):
        t = np.asarray(t, dtype=np.int64)
        arrays = [np.asarray(a, dtype=np.float64) for a in (x, mu, sigma, score)]
        if any(a.shape != t.shape for a in arrays):
            raise ShapeError(f"Detection arrays for {series_id} have inconsistent lengths")
        self.series_id = series_id
        self.t = t
        self.x, self.mu, self.sigma, self.score = arrays
        self.alpha = alpha
        self.flag = (self.score > alpha).astype(np.int64)
        self.timestamps = None if timestamps is None else np.asarray(timestamps, dtype=np.int64)
        self.nll = np.zeros(t.shape) if nll is None else np.asarray(nll, dtype=np.float64)
        self.fallback_normalizer = fallback_normalizer

    @classmethod
    def empty(cls, series_id, alpha):
        none = np.empty(0)
        return cls(series_id, np.empty(0, dtype=np.int64), none, none, none, none, alpha)

    def __len__(self):
        return self.t.size

    def with_alpha(self, alpha):
        """Same scores re-thresholded"""
        return DetectionResult(self.series_id, self.t, self.x, self.mu, self.sigma, self.score, alpha,
                               self.timestamps, self.nll, self.fallback_normalizer)

    def coverage(self, k=config.COVERAGE_ALPHA):
        """Fraction of samples inside mu +/- k*sigma"""
        if len(self) == 0:
            return math.nan
        return float(np.mean(self.score <= k))

    def mean_nll(self):
        if len(self) == 0:
            return math.nan
        return float(np.mean(self.nll))

    def to_frame(self):
        timestamps = (pd.array([pd.NA] * len(self), dtype="Int64") if self.timestamps is None
                      else pd.array(self.timestamps, dtype="Int64"))
        return pd.DataFrame({
            'series_id': pd.Series([self.series_id] * len(self), dtype=object),
            't': self.t,
            'timestamp': timestamps,
            'x': self.x,
            'mu': self.mu,
            'sigma': self.sigma,
            'score': self.score,
            'flag': self.flag,
        }, columns=SCORE_COLUMNS)

    def __repr__(self):
        return f"<DetectionResult(id='{self.series_id}', n={len(self)}, alpha={self.alpha}, flags={int(self.flag.sum())})>"


class EvalReport:
    """Point-wise confusion counts and the metrics derived from them"""

    def __init__(self, tp, fp, fn, tn, series_id=None):
        self.tp = int(tp)
        self.fp = int(fp)
        self.fn = int(fn)
        self.tn = int(tn)
        self.series_id = series_id

    @classmethod
    def pooled(cls, reports):
        """Counts summed over several reports"""
        reports = list(reports)
        return cls(
            sum(r.tp for r in reports), sum(r.fp for r in reports),
            sum(r.fn for r in reports), sum(r.tn for r in reports),
            POOLED_ROW_ID,
        )

    @property
    def precision(self):
        flagged = self.tp + self.fp
        return self.tp / flagged if flagged else 0.0

    @property
    def recall(self):
        positives = self.tp + self.fn
        return self.tp / positives if positives else 0.0

    @property
    def f1(self):
        p, r = self.precision, self.recall
        if p + r == 0.0:
            return 0.0
        return 2.0 * p * r / (p + r)

    @property
    def total(self):
        return self.tp + self.fp + self.fn + self.tn

    def to_dict(self):
        return {
            'series_id': self.series_id,
            'tp': self.tp,
            'fp': self.fp,
            'fn': self.fn,
            'tn': self.tn,
            'precision': self.precision,
            'recall': self.recall,
            'f1': self.f1,
        }

    def __repr__(self):
        return (f"<EvalReport(id={self.series_id}, tp={self.tp}, fp={self.fp}, fn={self.fn}, "
                f"tn={self.tn}, f1={self.f1:.4f})>")


class AlphaCalibration:
    """Alpha selected for one series; calibrated is False when the default was used"""

    def __init__(self, series_id, alpha, calibrated, f1=0.0):
        self.series_id = series_id
        self.alpha = alpha
        self.calibrated = calibrated
        self.f1 = f1

    def to_dict(self):
        return {'series_id': self.series_id, 'alpha': self.alpha,
                'calibrated': self.calibrated, 'f1': self.f1}

    def __repr__(self):
        return f"<AlphaCalibration(id='{self.series_id}', alpha={self.alpha}, calibrated={self.calibrated})>"


def metrics_frame(rows):
    """rows: iterable of (EvalReport, AlphaCalibration or None); a pooled row is appended"""
    rows = list(rows)
    records = []
    for report, calibration in rows:
        entry = report.to_dict()
        entry['alpha'] = None if calibration is None else calibration.alpha
        entry['calibrated'] = None if calibration is None else int(calibration.calibrated)
        records.append(entry)
    pooled = EvalReport.pooled(report for report, _ in rows).to_dict()
    pooled['alpha'] = None
    pooled['calibrated'] = None
    records.append(pooled)

    frame = pd.DataFrame(records, columns=METRICS_COLUMNS)
    frame['alpha'] = frame['alpha'].astype("Int64")
    frame['calibrated'] = frame['calibrated'].astype("Int64")
    return frame


class ZeroShotEntry:
    """Test-partition quality of one series under a zero-shot run"""

    def __init__(self, series_id, held_out, test_nll, coverage3, alpha, f1):
        self.series_id = series_id
        self.held_out = bool(held_out)
        self.test_nll = test_nll
        self.coverage3 = coverage3
        self.alpha = alpha
        self.f1 = f1

    def to_dict(self):
        return {
            'series_id': self.series_id,
            'held_out': int(self.held_out),
            'test_nll': self.test_nll,
            'coverage3': self.coverage3,
            'alpha': self.alpha,
            'f1': self.f1,
        }

    def __repr__(self):
        tag = "held-out" if self.held_out else "seen"
        return f"<ZeroShotEntry(id='{self.series_id}', {tag}, nll={self.test_nll})>"


class ZeroShotReport:
    """One entry per series (seen and held-out) for a single leave-out group"""

    def __init__(self, leave_out, entries, history=None):
        self.leave_out = list(leave_out)
        self.entries = list(entries)
        self.history = history

    def get(self, series_id):
        for entry in self.entries:
            if entry.series_id == series_id:
                return entry
        return None

    def held_out_ids(self):
        return [entry.series_id for entry in self.entries if entry.held_out]

    def to_frame(self):
        return pd.DataFrame([entry.to_dict() for entry in self.entries], columns=ZEROSHOT_COLUMNS)

    def __repr__(self):
        return f"<ZeroShotReport(leave_out={self.leave_out}, series={len(self.entries)})>"
