"""
Data formatting utilities
"""
import config


class Formatter:
    """Data formatting class"""

    @staticmethod
    def format_float(value):
        """Format a float losslessly (17 significant digits)"""
        if value is None:
            return ""
        return config.CSV_FLOAT_FORMAT % float(value)

    @staticmethod
    def format_loss(value):
        """Format a loss value for log lines"""
        if value is None:
            return "N/A"
        return f"{value:.6f}"

    @staticmethod
    def format_key_values(pairs):
        """Format (key, value) pairs as a single machine-parseable line"""
        return " ".join(f"{key}={value}" for key, value in pairs)
