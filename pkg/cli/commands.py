"""
Command Dispatcher - Runs one subcommand against a RunConfig and reports the outcome
"""
import glob
import logging
import os

import pandas as pd

import config
from models.fae_model import FaeModel
from models.results import DetectionResult, metrics_frame
from models.run_config import parse_config
from models.training import TrainingHistory
from services.detection_service import detection_service
from services.ingest_service import ingest_service, CsvSchema
from services.latent_service import latent_service
from services.search_service import search_service
from services.synth_service import synth_service
from services.training_service import training_service
from services.zero_shot_service import zero_shot_service
from storage.csv_store import csv_store
from storage.model_store import model_store
from utils.constants import (
    COMMANDS, COMMAND_SYNTH, COMMAND_TRAIN, COMMAND_SEARCH, COMMAND_DETECT, COMMAND_EVAL,
    COMMAND_LATENT, COMMAND_ZEROSHOT, COMMAND_INFO, SERIES_FILE, MODEL_FILE, METRICS_FILE,
    PROJECTIONS_FILE, SCORE_FILE_TEMPLATE, LEADERBOARD_FILE, HISTORY_FILE, ZEROSHOT_FILE_TEMPLATE,
)
from utils.errors import ConfigError, DataError, FaeError, TooShortError
from utils.formatters import Formatter

logger = logging.getLogger(__name__)


def emit_plot_csv(result, path):
    """Write a DetectionResult, TrainingHistory or projection table atomically"""
    if isinstance(result, (DetectionResult, TrainingHistory)):
        frame = result.to_frame()
    elif isinstance(result, pd.DataFrame):
        frame = result
    else:
        raise ConfigError(f"Cannot emit plot data for {type(result).__name__}")
    return csv_store.write_frame(frame, path)


class CommandDispatcher:
    """One handler per subcommand; every handler returns the written artifact paths"""

    def __init__(self):
        self.handlers = {
            COMMAND_SYNTH: self.run_synth,
            COMMAND_TRAIN: self.run_train,
            COMMAND_SEARCH: self.run_search,
            COMMAND_DETECT: self.run_detect,
            COMMAND_EVAL: self.run_eval,
            COMMAND_LATENT: self.run_latent,
            COMMAND_ZEROSHOT: self.run_zeroshot,
            COMMAND_INFO: self.run_info,
        }
        self.lines = []

    def dispatch(self, command, run_config):
        """
        Run a command

        Returns:
            dict: {'success': bool, 'message': str, 'exit_code': int, 'artifacts': list, 'family': str}
        """
        self.lines = []
        if command not in self.handlers:
            error = ConfigError(f"Unknown command '{command}'; expected one of {', '.join(COMMANDS)}")
            return self._failure(error)
        try:
            artifacts = self.handlers[command](run_config)
        except FaeError as e:
            logger.debug("Command %s failed", command, exc_info=True)
            return self._failure(e)
        return {
            'success': True,
            'message': "\n".join(self.lines),
            'exit_code': config.EXIT_OK,
            'artifacts': artifacts,
            'family': None,
        }

    def run(self, command, config_path=None, overrides=None):
        """Parse the configuration, then dispatch"""
        try:
            run_config = parse_config(config_path, overrides)
        except FaeError as e:
            return self._failure(e)
        return self.dispatch(command, run_config)

    @staticmethod
    def _failure(error):
        return {
            'success': False,
            'message': str(error),
            'exit_code': error.exit_code,
            'artifacts': [],
            'family': error.family,
        }

    def _say(self, *pairs):
        self.lines.append(Formatter.format_key_values(pairs))

    # ==========================
    # INPUTS
    # ==========================

    @staticmethod
    def load_dataset(run_config):
        """Every configured source (CSV, UCR files, synthetic spec), in that order"""
        records = []
        if run_config['data_csv']:
            schema = CsvSchema.from_dict(run_config.csv_schema())
            records.extend(ingest_service.load_series_csv(run_config['data_csv'], schema, run_config['gap_policy']))
        if run_config['data_ucr']:
            for path in CommandDispatcher._ucr_paths(run_config['data_ucr']):
                records.append(ingest_service.load_ucr_file(path))
        if run_config['synth_spec']:
            records.extend(synth_service.generate_from_file(run_config['synth_spec']))
        if not records:
            raise ConfigError("No data source configured; set data_csv, data_ucr or synth_spec")
        ids = [record.series_id for record in records]
        duplicates = sorted({series_id for series_id in ids if ids.count(series_id) > 1})
        if duplicates:
            raise DataError(f"Duplicate series ids across data sources: {duplicates}")
        return records

    @staticmethod
    def _ucr_paths(spec):
        paths = []
        for item in filter(None, (part.strip() for part in spec.split(','))):
            if os.path.isdir(item):
                paths.extend(sorted(glob.glob(os.path.join(item, '*.txt'))))
            else:
                paths.append(item)
        return paths

    @staticmethod
    def _model_path(run_config):
        return run_config['model_path'] or os.path.join(run_config['output_dir'], MODEL_FILE)

    def _load_model(self, run_config):
        return model_store.load_model(self._model_path(run_config))

    # ==========================
    # COMMANDS
    # ==========================

    def run_synth(self, run_config):
        if not run_config['synth_spec']:
            raise ConfigError("synth needs synth_spec")
        records = synth_service.generate_from_file(run_config['synth_spec'])
        path = ingest_service.write_series_csv(records, os.path.join(run_config['output_dir'], SERIES_FILE))
        self._say(('series', len(records)), ('file', path))
        return [path]

    def run_train(self, run_config):
        dataset = self.load_dataset(run_config)
        hyper = run_config.hyperparams()
        model = FaeModel.build(hyper, run_config['seed'])
        output_dir = run_config['output_dir']
        model, history = training_service.train(model, dataset, run_config.train_config(output_dir))
        model_path = os.path.join(output_dir, MODEL_FILE)
        if run_config['model_path'] and run_config['model_path'] != model_path:
            model_store.save_model(model, run_config['model_path'])
            model_path = run_config['model_path']
        self._say(('best_epoch', history.best_epoch), ('val_loss', Formatter.format_float(history.best_val_loss)),
                  ('stopped_early', int(history.stopped_early)))
        return [model_path, os.path.join(output_dir, HISTORY_FILE)]

    def run_search(self, run_config):
        dataset = self.load_dataset(run_config)
        output_dir = run_config['output_dir']
        result = search_service.hyperparameter_search(
            run_config.search_space(), dataset, run_config['search_budget'],
            base_config=run_config.train_config(), epochs=run_config['search_epochs'], output_dir=output_dir,
        )
        best = result.best
        self._say(('T', best.window), ('J', best.latent_dim), ('U', best.filters),
                  ('gamma', Formatter.format_float(best.learning_rate)), ('m', best.batch_size))
        return [os.path.join(output_dir, LEADERBOARD_FILE)]

    def run_detect(self, run_config):
        model = self._load_model(run_config)
        dataset = self.load_dataset(run_config)
        alpha = run_config['alpha']
        paths = []
        for series in dataset:
            try:
                result = detection_service.score_online(model, series, alpha)
            except TooShortError as e:
                logger.warning("%s; writing an empty score file", e)
                result = DetectionResult.empty(series.series_id, alpha)
            path = os.path.join(run_config['output_dir'], SCORE_FILE_TEMPLATE.format(series_id=series.series_id))
            paths.append(emit_plot_csv(result, path))
            self._say(('series_id', series.series_id), ('scored', len(result)), ('flags', int(result.flag.sum())))
        return paths

    def run_eval(self, run_config):
        model = self._load_model(run_config)
        dataset = training_service.resolve_splits(self.load_dataset(run_config), run_config.train_config())
        calibrations = detection_service.calibrate_alpha(model, dataset, run_config['alpha_grid'],
                                                         run_config['alpha'])
        rows = []
        for series in dataset:
            calibration = calibrations[series.series_id]
            _, val_end = series.partition_bounds()
            if len(series) < model.hyper.window or val_end >= len(series):
                logger.warning("Series %s has no test windows; skipped", series.series_id)
                continue
            _, report = detection_service.evaluate_series(model, series, calibration.alpha, first_end=val_end)
            rows.append((report, calibration))
            self._say(('series_id', series.series_id), ('alpha', calibration.alpha),
                      ('f1', Formatter.format_float(report.f1)))
        path = csv_store.write_frame(metrics_frame(rows), os.path.join(run_config['output_dir'], METRICS_FILE))
        return [path]

    def run_latent(self, run_config):
        model = self._load_model(run_config)
        dataset = self.load_dataset(run_config)
        matrix = latent_service.encode_series(model, dataset)
        pca, projections = latent_service.pca_project(matrix, run_config['pca_components'])
        table = latent_service.projection_table(projections, matrix, samples_per_day=run_config['samples_per_day'],
                                                days_per_week=run_config['days_per_week'])
        path = emit_plot_csv(table, os.path.join(run_config['output_dir'], PROJECTIONS_FILE))
        self._say(('rows', len(matrix)), ('explained', Formatter.format_float(pca.explained_ratio().sum())))
        return [path]

    def run_zeroshot(self, run_config):
        dataset = self.load_dataset(run_config)
        output_dir = run_config['output_dir']
        groups = run_config.leave_out_groups()
        reports = zero_shot_service.zero_shot_protocol(dataset, groups, run_config.hyperparams(),
                                                       run_config.train_config(), run_config['alpha'],
                                                       output_dir)
        paths = []
        for index, report in enumerate(reports, start=1):
            paths.append(os.path.join(output_dir, ZEROSHOT_FILE_TEMPLATE.format(index=index)))
            self._say(('run', index), ('held_out', ",".join(report.leave_out) or "-"))
        return paths

    def run_info(self, run_config):
        if run_config['model_path']:
            model = model_store.load_model(run_config['model_path'])
            header = model_store.encode_header(model).decode('utf-8').strip().splitlines()
            self.lines.extend(header)
            hyper, params = model.hyper, model.param_count()
        else:
            hyper = run_config.hyperparams()
            params = hyper.expected_param_count()
        self._say(('N', hyper.depth), ('params', params))
        return []


# Global dispatcher instance
command_dispatcher = CommandDispatcher()


def dispatch(command, run_config):
    return command_dispatcher.dispatch(command, run_config)
