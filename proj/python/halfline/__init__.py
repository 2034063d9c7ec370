"""Impulsive coupled boundary-value problems on the half-line."""

from ._halfline import (
    EvaluationError,
    Problem,
    ProblemFormatError,
    ValidationError,
    __version__,
    boundary_weight_sup,
    cli_check,
    cli_solve,
    green,
    kernel_weight_sup,
    load_problem,
    parse_problem,
    pendulum_bound_Phi,
    pendulum_bound_Psi,
)

__all__ = [
    "EvaluationError",
    "Problem",
    "ProblemFormatError",
    "ValidationError",
    "__version__",
    "boundary_weight_sup",
    "cli_check",
    "cli_solve",
    "green",
    "kernel_weight_sup",
    "load_problem",
    "parse_problem",
    "pendulum_bound_Phi",
    "pendulum_bound_Psi",
]
