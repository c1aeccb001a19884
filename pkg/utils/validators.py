"""
Input validation utilities
"""
import re

import numpy as np


class Validator:
    """Input validation class"""

    SERIES_ID_PATTERN = re.compile(r'^[^\s=,;#]+$')

    @staticmethod
    def validate_series_id(series_id):
        """Validate series id (non-empty, no whitespace or config separators)"""
        if not series_id or not isinstance(series_id, str):
            return False
        return Validator.SERIES_ID_PATTERN.match(series_id) is not None

    @staticmethod
    def validate_positive_number(value, allow_zero=False):
        """Validate positive number"""
        try:
            num = float(value)
            if not np.isfinite(num):
                return False
            if allow_zero:
                return num >= 0
            return num > 0
        except (ValueError, TypeError):
            return False

    @staticmethod
    def validate_positive_integer(value, allow_zero=False):
        """Validate positive integer (bools and floats with a fraction are rejected)"""
        if isinstance(value, bool):
            return False
        if isinstance(value, (float, np.floating)) and not float(value).is_integer():
            return False
        try:
            num = int(value)
            if allow_zero:
                return num >= 0
            return num > 0
        except (ValueError, TypeError):
            return False

    @staticmethod
    def validate_fraction(value):
        """Validate a number strictly inside (0, 1)"""
        try:
            num = float(value)
            return 0.0 < num < 1.0
        except (ValueError, TypeError):
            return False

    @staticmethod
    def all_finite(array):
        """True when every element is finite"""
        return bool(np.all(np.isfinite(array)))
