"""
Application constants
"""

# Commands
COMMAND_SYNTH = "synth"
COMMAND_TRAIN = "train"
COMMAND_SEARCH = "search"
COMMAND_DETECT = "detect"
COMMAND_EVAL = "eval"
COMMAND_LATENT = "latent"
COMMAND_ZEROSHOT = "zeroshot"
COMMAND_INFO = "info"
COMMANDS = (
    COMMAND_SYNTH, COMMAND_TRAIN, COMMAND_SEARCH, COMMAND_DETECT,
    COMMAND_EVAL, COMMAND_LATENT, COMMAND_ZEROSHOT, COMMAND_INFO,
)

# Gap Policies
GAP_POLICY_REJECT = "reject"
GAP_POLICY_INTERPOLATE = "interpolate"
GAP_POLICIES = (GAP_POLICY_REJECT, GAP_POLICY_INTERPOLATE)

# Relu Modes
RELU_FORWARD = "forward"
RELU_BACKWARD = "backward"

# Parameter Layout Names
ENCODER_PREFIX = "encoder"
DECODER_PREFIX = "decoder"
ENC_MU_HEAD = "enc_mu_head"
ENC_LOGSIGMA_HEAD = "enc_logsigma_head"
DEC_MU_HEAD = "dec_mu_head"
DEC_LOGSIGMA_HEAD = "dec_logsigma_head"

# Output Files
HISTORY_FILE = "history.csv"
MODEL_FILE = "model.fae"
SERIES_FILE = "series.csv"
LEADERBOARD_FILE = "leaderboard.csv"
METRICS_FILE = "metrics.csv"
PROJECTIONS_FILE = "projections.csv"
SCORE_FILE_TEMPLATE = "scores_{series_id}.csv"
ZEROSHOT_FILE_TEMPLATE = "zeroshot_run{index}.csv"
POOLED_ROW_ID = "__pooled__"

# CSV Schemas
SERIES_COLUMNS = ["timestamp", "series_id", "value", "label"]
SCORE_COLUMNS = ["series_id", "t", "timestamp", "x", "mu", "sigma", "score", "flag"]
HISTORY_COLUMNS = ["epoch", "train_loss", "val_loss"]
LEADERBOARD_COLUMNS = ["rank", "T", "J", "gamma", "m", "U", "val_loss", "params"]
ZEROSHOT_COLUMNS = ["series_id", "held_out", "test_nll", "coverage3", "alpha", "f1"]
PROJECTION_COLUMNS = ["series_id", "t", "timestamp", "pc1", "pc2", "pc3",
                      "hour_bucket", "weekend", "day", "radius"]
METRICS_COLUMNS = ["series_id", "alpha", "calibrated", "tp", "fp", "fn", "tn",
                   "precision", "recall", "f1"]
