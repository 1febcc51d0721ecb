"""LDES viability cost engine."""

import json as _json

from . import _core
from ._core import (
    ArgumentError,
    ConsistencyError,
    IoError,
    LdesError,
    SolveError,
    StateError,
    ValidationError,
    classify_threshold,
    export_mps,
    kmeans_1d,
    log_grid,
    parse_grid,
    run,
    validate,
    write_synthetic_state,
)

__version__ = _core.version()


def analyze(input_dir, grid=None, refine=-1, duration_h=None, rte=None, backend="ipm"):
    """Baseline, viability curve and metrics of one state as plain dicts."""
    return _json.loads(
        _core.analyze(str(input_dir), grid, refine, duration_h, rte, backend)
    )


__all__ = [
    "ArgumentError",
    "ConsistencyError",
    "IoError",
    "LdesError",
    "SolveError",
    "StateError",
    "ValidationError",
    "analyze",
    "classify_threshold",
    "export_mps",
    "kmeans_1d",
    "log_grid",
    "parse_grid",
    "run",
    "validate",
    "write_synthetic_state",
]
