"""Covert, secure two-user downlink with a friendly jammer.

Configurations are plain dicts with the same keys as the JSON files read by
the ``covertnet`` command-line tool.
"""

import json

from . import _core
from ._core import (
    ValidationError,
    false_alarm,
    min_detection_error,
    missed_detection,
    optimal_threshold,
    run_cli,
    spearman,
)

__version__ = _core.__version__


def _dump(config):
    return json.dumps(config or {})


def resolved_config(config=None):
    """The validated configuration with every default filled in."""
    return json.loads(_core.resolved_config(_dump(config)))


def solve_slot(config=None, trial=0):
    """Draws one fading realization and returns the optimal power split."""
    return _core.solve_slot(_dump(config), trial)


def sweep(config=None):
    """Runs the configured sweep; one dict per swept value."""
    return _core.sweep(_dump(config))


__all__ = [
    "ValidationError",
    "false_alarm",
    "min_detection_error",
    "missed_detection",
    "optimal_threshold",
    "resolved_config",
    "run_cli",
    "solve_slot",
    "spearman",
    "sweep",
]
