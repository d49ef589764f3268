"""Convergence studies, truncation measurements, kernel inspection and artifacts"""

from .reference import ReferenceColumn, reference_column, find_reference, all_columns, TABLE_NAMES
from .convergence import (
    ConvergenceRow,
    ConvergenceTable,
    ConvergenceHarness,
    AcceptanceCriterion,
    convergence_study,
    self_convergence,
    compare_schemes,
    expected_order,
    optimal_grading,
    calibrate_norm,
    compare_with_reference,
    estimate_spatial_floor,
    check_doubling,
    EXACT_TOL,
)
from .truncation import TruncationReport, TruncationStudy, DecayFit, truncation_study, fit_decay
from .inspection import KernelInspector, KernelInspection, FuzzReport, kernel_columns
from .artifacts import (
    write_csv,
    write_json,
    render_csv,
    render_json,
    CONVERGENCE_COLUMNS,
    STEP_COLUMNS,
    DCC_COLUMNS,
)

__all__ = [
    "ReferenceColumn",
    "reference_column",
    "find_reference",
    "all_columns",
    "TABLE_NAMES",
    "ConvergenceRow",
    "ConvergenceTable",
    "ConvergenceHarness",
    "AcceptanceCriterion",
    "convergence_study",
    "self_convergence",
    "compare_schemes",
    "expected_order",
    "optimal_grading",
    "calibrate_norm",
    "compare_with_reference",
    "estimate_spatial_floor",
    "check_doubling",
    "EXACT_TOL",
    "TruncationReport",
    "TruncationStudy",
    "DecayFit",
    "truncation_study",
    "fit_decay",
    "KernelInspector",
    "KernelInspection",
    "FuzzReport",
    "kernel_columns",
    "write_csv",
    "write_json",
    "render_csv",
    "render_json",
    "CONVERGENCE_COLUMNS",
    "STEP_COLUMNS",
    "DCC_COLUMNS",
]
