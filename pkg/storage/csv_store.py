"""
CSV Store - Atomic file writes (temp file + rename) and lossless CSV reads
"""
import logging
import os
import tempfile

import pandas as pd

import config
from utils.errors import StorageIOError, DataError

logger = logging.getLogger(__name__)


class CsvStore:
    """All artifact writes go through here so no final path is ever half-written"""

    def _atomic_write(self, path, writer, mode):
        directory = os.path.dirname(os.path.abspath(path))
        try:
            os.makedirs(directory, exist_ok=True)
            fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
        except OSError as e:
            raise StorageIOError(f"Cannot write {path}: {e}") from e

        try:
            with os.fdopen(fd, mode, **({'encoding': 'utf-8', 'newline': ''} if 'b' not in mode else {})) as handle:
                writer(handle)
            os.replace(tmp_path, path)
        except OSError as e:
            self._discard(tmp_path)
            raise StorageIOError(f"Cannot write {path}: {e}") from e
        except BaseException:
            self._discard(tmp_path)
            raise
        logger.debug("Wrote %s", path)
        return path

    @staticmethod
    def _discard(tmp_path):
        try:
            os.remove(tmp_path)
        except OSError:
            pass

    # ==========================
    # WRITERS
    # ==========================

    def write_frame(self, frame, path):
        """Write a DataFrame with 17-significant-digit floats"""
        return self._atomic_write(
            path,
            lambda handle: frame.to_csv(handle, index=False, float_format=config.CSV_FLOAT_FORMAT,
                                        lineterminator='\n'),
            'w',
        )

    def write_text(self, path, text):
        return self._atomic_write(path, lambda handle: handle.write(text), 'w')

    def write_bytes(self, path, data):
        return self._atomic_write(path, lambda handle: handle.write(data), 'wb')

    # ==========================
    # READERS
    # ==========================

    def read_frame(self, path, **kwargs):
        """Read a CSV back with exact float round-trip"""
        if not os.path.exists(path):
            raise DataError(f"Input file not found: {path}")
        try:
            return pd.read_csv(path, float_precision='round_trip', encoding='utf-8', **kwargs)
        except UnicodeDecodeError as e:
            raise DataError(f"{path} is not valid UTF-8 (byte offset {e.start})") from e
        except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
            raise DataError(f"Malformed CSV {path}: {e}") from e
        except OSError as e:
            raise StorageIOError(f"Cannot read {path}: {e}") from e

    def read_text(self, path):
        """Whole UTF-8 text file; undecodable bytes are a data error"""
        if not os.path.exists(path):
            raise DataError(f"Input file not found: {path}")
        try:
            with open(path, 'r', encoding='utf-8') as handle:
                return handle.read()
        except UnicodeDecodeError as e:
            raise DataError(f"{path} is not valid UTF-8 (byte offset {e.start})") from e
        except OSError as e:
            raise StorageIOError(f"Cannot read {path}: {e}") from e


# Global CSV store instance
csv_store = CsvStore()
