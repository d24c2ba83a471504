"""Bifactor reliability and digestion-efficiency scoring."""

from ._digestlab import (
    ConvergenceError,
    Error,
    __version__,
    builtin_weights,
    correlate,
    extract_paf,
    fit,
    omegas,
    rotate_quartimin,
    run_cli,
    schmid_leiman,
    score,
    second_order,
    simulate,
)

__all__ = [
    "ConvergenceError",
    "Error",
    "__version__",
    "builtin_weights",
    "correlate",
    "extract_paf",
    "fit",
    "omegas",
    "rotate_quartimin",
    "run_cli",
    "schmid_leiman",
    "score",
    "second_order",
    "simulate",
]
