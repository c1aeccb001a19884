"""
Configuration settings for the FAE time-series modeling toolkit
"""
import os

# Paths
DEFAULT_OUTPUT_DIR = os.environ.get('FAE_OUTPUT_DIR', os.path.join(os.getcwd(), 'fae_output'))

# Application Settings
APP_NAME = "FAE Toolkit"
APP_VERSION = "1.0.0"
LOG_LEVEL = os.environ.get('FAE_LOG_LEVEL', 'INFO')
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

# Architecture Defaults (best calibrated column)
DEFAULT_WINDOW_LENGTH = 256
DEFAULT_LATENT_DIM = 48
DEFAULT_HIDDEN_FILTERS = 128
DEFAULT_FILTER_LENGTH = 2
DEFAULT_LEARNING_RATE = 6e-5
DEFAULT_BATCH_SIZE = 32
DEFAULT_BETA = 1.0
DEFAULT_ALPHA = 3

# Numeric Guards
LOG_SIGMA_MIN = -6.0
LOG_SIGMA_MAX = 6.0
SIGMA_FLOOR = 1e-3
NORMALIZER_STD_FLOOR = 1e-8

# Training Settings
DEFAULT_MAX_EPOCHS = 100
DEFAULT_PATIENCE = 10
DEFAULT_SEED = 0
DEFAULT_STRIDE_TRAIN = 1
DEFAULT_TRAIN_FRACTION = 3 / 7
DEFAULT_VAL_FRACTION = 1 / 7
EVAL_CHUNK_SIZE = 256

# Adam
ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPSILON = 1e-8

# Hyperparameter Search Ranges
SEARCH_WINDOW_RANGE = (128, 512, 32)
SEARCH_LATENT_MIN = 16
SEARCH_LATENT_STEP = 16
SEARCH_LEARNING_RATE_RANGE = (1e-5, 5e-4)
SEARCH_BATCH_RANGE = (16, 96, 16)
SEARCH_FILTER_RANGE = (16, 128, 16)
DEFAULT_SEARCH_BUDGET = 50
DEFAULT_SEARCH_EPOCHS = 5

# Detection Settings
DEFAULT_ALPHA_GRID = (1, 2, 3, 4, 5, 6)
COVERAGE_ALPHA = 3
UCR_VALIDATION_FRACTION = 0.2

# Latent Analysis
DEFAULT_PCA_COMPONENTS = 3
HOUR_BUCKETS = 8
DEFAULT_DAYS_PER_WEEK = 7

# Data Settings
DEFAULT_STEP_SECONDS = 300
DEFAULT_GAP_POLICY = "reject"

# File Formats
MODEL_FILE_MAGIC = b"FAE1"
CSV_FLOAT_FORMAT = "%.17g"

# Exit Codes
EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_FORMAT = 4
EXIT_NUMERIC = 5
EXIT_IO = 6
