"""Python front end to the pairfinder core.

Configs may be given as a dict, a JSON string or a path to a JSON file;
relative csv paths resolve against the file's directory (or the current
directory for dicts and strings).
"""

import json
import os

from ._pairfinder import (
    PairfinderError,
    auc,
    backtest,
    build_dataset,
    chronological_split,
    compute_return,
    confusion_metrics,
    ema,
    macd,
    mean_system_accuracy,
    model_kinds,
    nnp,
    normalized_acc,
    rsi,
    set_log_level,
    sma,
    synthetic_csv,
    train_and_score,
    walk_forward_splits,
)
from . import _pairfinder as _core

__all__ = [
    "PairfinderError",
    "auc",
    "backtest",
    "build_dataset",
    "chronological_split",
    "compute_return",
    "confusion_metrics",
    "ema",
    "macd",
    "mean_system_accuracy",
    "model_kinds",
    "nnp",
    "normalized_acc",
    "rsi",
    "run",
    "set_log_level",
    "sma",
    "synthetic_csv",
    "train_and_score",
    "walk_forward",
    "walk_forward_splits",
]


def _config_text(config):
    if isinstance(config, dict):
        return json.dumps(config), os.getcwd()
    if isinstance(config, (str, os.PathLike)) and os.path.isfile(config):
        with open(config, encoding="utf-8") as fh:
            return fh.read(), os.path.dirname(os.path.abspath(config))
    return str(config), os.getcwd()


def run(config, *, seed=None, out=None, models=None, mode=None, emit=True):
    """One training cycle. Returns records, selection and summary as a dict."""
    text, base = _config_text(config)
    return _core.run(text, base, seed=seed, out=None if out is None else str(out), models=models, mode=mode, emit=emit)


def walk_forward(config, windows=None, *, seed=None, out=None, models=None, mode=None):
    """Walk-forward replay; one report dict per window."""
    text, base = _config_text(config)
    return _core.walk_forward(text, base, windows=windows, seed=seed, out=None if out is None else str(out),
                              models=models, mode=mode)
