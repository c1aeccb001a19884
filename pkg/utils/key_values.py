"""
Flat key=value file parsing shared by run configs and synthetic specs
"""
import os

from utils.errors import ConfigError, DataError


def parse_key_value_text(text, source="<text>"):
    """Ordered {key: raw_value}; '#' starts a comment, blank lines are skipped"""
    entries = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition('=')
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"{source}:{number}: expected key=value, got {raw!r}")
        if key in entries:
            raise ConfigError(f"{source}:{number}: duplicate key '{key}'")
        entries[key] = value.strip()
    return entries


def read_key_value_file(path):
    if not os.path.exists(path):
        raise DataError(f"Config file not found: {path}")
    try:
        with open(path, 'r', encoding='utf-8') as handle:
            text = handle.read()
    except UnicodeDecodeError as e:
        raise DataError(f"{path} is not valid UTF-8 (byte offset {e.start})") from e
    except OSError as e:
        raise DataError(f"Cannot read {path}: {e}") from e
    return parse_key_value_text(text, path)


def parse_override(item):
    """Split one `key=value` command-line override"""
    key, sep, value = item.partition('=')
    if not sep or not key.strip():
        raise ConfigError(f"Override must look like key=value, got {item!r}")
    return key.strip(), value.strip()
