"""
Model Store - Versioned binary model files

Layout: magic b"FAE1", a UTF-8 header of key=value lines closed by a blank
line, then every weight array in layout order as little-endian float64.
"""
import logging
import os

import numpy as np

import config
from engine.layers import ConvParams
from models.fae_model import FaeModel, layer_shapes
from models.hyperparams import FaeHyperparams
from models.normalizer import Normalizer
from storage.csv_store import csv_store
from utils.errors import FormatError, CorruptionError, DataError, FaeError
from utils.formatters import Formatter
from utils.validators import Validator

logger = logging.getLogger(__name__)

HEADER_TERMINATOR = b"\n\n"
NORM_PREFIX = "norm."
HEADER_KEYS = ("T", "J", "U", "F", "N", "beta")


class ModelStore:
    """Serialize and restore FaeModel instances"""

    # ==========================
    # ENCODING
    # ==========================

    def encode_header(self, model):
        hyper = model.hyper
        lines = [
            f"T={hyper.window}",
            f"J={hyper.latent_dim}",
            f"U={hyper.filters}",
            f"F={hyper.kernel}",
            f"N={hyper.depth}",
            f"beta={Formatter.format_float(hyper.beta)}",
        ]
        for series_id, (mean, std) in model.normalizer.to_dict().items():
            if not Validator.validate_series_id(series_id):
                raise FormatError(f"Series id {series_id!r} cannot be stored in a model header")
            lines.append(f"{NORM_PREFIX}{series_id}={Formatter.format_float(mean)},{Formatter.format_float(std)}")
        return ("\n".join(lines) + "\n").encode('utf-8')

    def to_bytes(self, model):
        payload = b"".join(
            np.ascontiguousarray(layer.weights, dtype='<f8').tobytes()
            for layer in model.named_parameters().values()
        )
        return config.MODEL_FILE_MAGIC + self.encode_header(model) + b"\n" + payload

    def save_model(self, model, path):
        """Write the model atomically"""
        csv_store.write_bytes(path, self.to_bytes(model))
        logger.info("Saved model (%d parameters) to %s", model.param_count(), path)
        return path

    # ==========================
    # DECODING
    # ==========================

    def parse_header(self, text):
        fields, stats = {}, {}
        for line in text.split("\n"):
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise FormatError(f"Malformed header line: {line!r}")
            if key.startswith(NORM_PREFIX):
                mean, comma, std = value.partition(",")
                if not comma:
                    raise FormatError(f"Malformed normalizer line: {line!r}")
                try:
                    stats[key[len(NORM_PREFIX):]] = (float(mean), float(std))
                except ValueError as e:
                    raise FormatError(f"Malformed normalizer line: {line!r}") from e
            elif key in HEADER_KEYS:
                fields[key] = value
            else:
                raise FormatError(f"Unknown header key: {key!r}")

        missing = [key for key in HEADER_KEYS if key not in fields]
        if missing:
            raise FormatError(f"Model header is missing keys: {missing}")
        try:
            hyper = FaeHyperparams(
                window=int(fields['T']), latent_dim=int(fields['J']), filters=int(fields['U']),
                kernel=int(fields['F']), beta=float(fields['beta']),
            )
        except (ValueError, FaeError) as e:
            raise FormatError(f"Invalid hyperparameters in model header: {e}") from e
        if hyper.depth != int(fields['N']):
            raise FormatError(f"Header N={fields['N']} contradicts derived depth {hyper.depth}")
        return hyper, Normalizer(stats)

    def from_bytes(self, data):
        magic = config.MODEL_FILE_MAGIC
        if not data.startswith(magic):
            raise FormatError("Not a model file (bad magic or unsupported version)")
        cut = data.find(HEADER_TERMINATOR, len(magic))
        if cut < 0:
            raise CorruptionError("Model header is not terminated")
        try:
            header = data[len(magic):cut + 1].decode('utf-8')
        except UnicodeDecodeError as e:
            raise FormatError("Model header is not valid UTF-8") from e
        hyper, normalizer = self.parse_header(header)

        payload = data[cut + len(HEADER_TERMINATOR):]
        shapes = layer_shapes(hyper)
        expected = 8 * sum(int(np.prod(shape)) for _, shape, _ in shapes)
        if len(payload) != expected:
            raise CorruptionError(f"Payload holds {len(payload)} bytes, header implies {expected}")

        flat = np.frombuffer(payload, dtype='<f8').astype(np.float64)
        params, cursor = {}, 0
        for name, shape, dilation in shapes:
            count = int(np.prod(shape))
            params[name] = ConvParams(flat[cursor:cursor + count].reshape(shape).copy(), dilation)
            cursor += count
        return FaeModel(hyper, params, normalizer)

    def load_model(self, path):
        if not os.path.exists(path):
            raise DataError(f"Model file not found: {path}")
        with open(path, 'rb') as handle:
            data = handle.read()
        model = self.from_bytes(data)
        logger.info("Loaded model %r from %s", model.hyper, path)
        return model


# Global model store instance
model_store = ModelStore()


def save_model(model, path):
    return model_store.save_model(model, path)


def load_model(path):
    return model_store.load_model(path)
