"""Python access to the plug-in active learner and its checks."""

from ._core import (
    RATES_CSV_HEADER,
    RUN_CSV_HEADER,
    ArgumentError,
    DomainError,
    bump_u,
    eta,
    index_set,
    minimax_check,
    problem_names,
    rates_csv,
    run_active,
    run_csv,
    run_passive,
    verify,
)

__all__ = [
    "RATES_CSV_HEADER",
    "RUN_CSV_HEADER",
    "ArgumentError",
    "DomainError",
    "bump_u",
    "eta",
    "index_set",
    "minimax_check",
    "problem_names",
    "rates_csv",
    "run_active",
    "run_csv",
    "run_passive",
    "verify",
]
