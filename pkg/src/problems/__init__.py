"""Manufactured and user-supplied problems"""

from .caputo import caputo_power
from .examples import (
    ProblemSpec,
    Nonlinearity,
    example_51,
    example_52,
    linear_in_time,
    quadratic_in_time,
)
from .custom import CustomProblem, custom_problem, check_custom_grid, forcing_filename

PROBLEM_NAMES = ("example51", "example52", "custom")

__all__ = [
    "caputo_power",
    "ProblemSpec",
    "Nonlinearity",
    "example_51",
    "example_52",
    "linear_in_time",
    "quadratic_in_time",
    "CustomProblem",
    "custom_problem",
    "check_custom_grid",
    "forcing_filename",
    "PROBLEM_NAMES",
]
