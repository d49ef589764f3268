"""Time steppers for the fractional diffusion-wave equation"""

from .states import SchemeState, StepSolveStats, SolutionReport, StepperOptions
from .l1_stepper import (
    L1Stepper,
    assemble_history,
    step_linear,
    step_semilinear,
    initial_state,
    run,
)
from .bdf2_stepper import Bdf2Stepper, bdf2_run, EXPERIMENTAL_NOTE

__all__ = [
    "SchemeState",
    "StepSolveStats",
    "SolutionReport",
    "StepperOptions",
    "L1Stepper",
    "assemble_history",
    "step_linear",
    "step_semilinear",
    "initial_state",
    "run",
    "Bdf2Stepper",
    "bdf2_run",
    "EXPERIMENTAL_NOTE",
]
