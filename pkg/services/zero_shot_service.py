"""
Zero-Shot Service - Train on a reduced dataset and score seen and held-out series alike
"""
import logging
import math
import os

import config
from models.fae_model import FaeModel
from models.results import ZeroShotEntry, ZeroShotReport
from services.detection_service import detection_service
from services.training_service import training_service
from storage.csv_store import csv_store
from utils.constants import ZEROSHOT_FILE_TEMPLATE
from utils.errors import ConfigError

logger = logging.getLogger(__name__)


class ZeroShotService:
    """Service for leave-out experiments"""

    def zero_shot_run(self, dataset, leave_out, hyper, train_config, alpha=config.DEFAULT_ALPHA):
        """
        Train without the `leave_out` series, then report test NLL, 3-sigma
        coverage and F1 on the test partition of every series.
        """
        known = {series.series_id for series in dataset}
        unknown = [series_id for series_id in leave_out if series_id not in known]
        if unknown:
            raise ConfigError(f"leave_out names unknown series: {unknown}")
        dataset = training_service.resolve_splits(dataset, train_config)
        included = [series for series in dataset if series.series_id not in leave_out]
        if not included:
            raise ConfigError("Leaving out every series leaves nothing to train on")

        logger.info("Zero-shot run: training on %d series, holding out %s", len(included), list(leave_out))
        model, history = training_service.train(
            FaeModel.build(hyper, train_config.seed), included, train_config.replace(output_dir=None))

        entries = []
        for series in dataset:
            held_out = series.series_id in leave_out
            entries.append(self._test_entry(model, series, held_out, alpha))
        return ZeroShotReport(leave_out, entries, history)

    @staticmethod
    def _test_entry(model, series, held_out, alpha):
        _, val_end = series.partition_bounds()
        if len(series) < model.hyper.window or val_end >= len(series):
            logger.warning("Series %s has no scorable test windows; reported as NaN", series.series_id)
            return ZeroShotEntry(series.series_id, held_out, math.nan, math.nan, alpha, math.nan)
        result, report = detection_service.evaluate_series(model, series, alpha, first_end=val_end)
        return ZeroShotEntry(series.series_id, held_out, result.mean_nll(), result.coverage(), alpha, report.f1)

    def zero_shot_protocol(self, dataset, leave_out_groups, hyper, train_config,
                           alpha=config.DEFAULT_ALPHA, output_dir=None):
        """One report per leave-out group; reports are written as zeroshot_run<i>.csv"""
        reports = []
        for index, group in enumerate(leave_out_groups, start=1):
            report = self.zero_shot_run(dataset, group, hyper, train_config, alpha)
            reports.append(report)
            if output_dir:
                path = os.path.join(output_dir, ZEROSHOT_FILE_TEMPLATE.format(index=index))
                csv_store.write_frame(report.to_frame(), path)
        return reports


# Global zero-shot service instance
zero_shot_service = ZeroShotService()


def zero_shot_run(dataset, leave_out, hyper, train_config, alpha=config.DEFAULT_ALPHA):
    return zero_shot_service.zero_shot_run(dataset, leave_out, hyper, train_config, alpha)
