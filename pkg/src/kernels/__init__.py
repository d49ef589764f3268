"""Discrete Caputo kernels: L1 rows, DCC rows, BDF2 rows and their property checks"""

from .weights import FracOrder, omega, power_gap
from .l1 import (
    L1KernelRow,
    L1KernelTable,
    l1_row,
    l1_matrix,
    discrete_caputo,
    half_level_diffs,
)
from .dcc import (
    DccKernelRow,
    DccSummary,
    dcc_row,
    dcc_rows,
    dcc_matrix,
    zeta_matrix,
    verify_identity,
    orthogonality_residual,
    positive_definiteness_margin,
    quadratic_form,
    sum_bound_margins,
    summarize,
    alpha_limit_probe,
)
from .lemma import (
    LemmaReport,
    PropertyCheck,
    PROPERTY_NAMES,
    check_kernel_lemma,
    omega_consistency_gap,
    peano_kernel,
    peano_kernel_lower,
)
from .bdf2 import Bdf2KernelRow, bdf2_row, bdf2_caputo, integer_kernels, step_ratios
from .quadrature import l1_entry_by_quadrature, bdf2_entries_by_quadrature

__all__ = [
    "FracOrder",
    "omega",
    "power_gap",
    "L1KernelRow",
    "L1KernelTable",
    "l1_row",
    "l1_matrix",
    "discrete_caputo",
    "half_level_diffs",
    "DccKernelRow",
    "DccSummary",
    "dcc_row",
    "dcc_rows",
    "dcc_matrix",
    "zeta_matrix",
    "verify_identity",
    "orthogonality_residual",
    "positive_definiteness_margin",
    "quadratic_form",
    "sum_bound_margins",
    "summarize",
    "alpha_limit_probe",
    "LemmaReport",
    "PropertyCheck",
    "PROPERTY_NAMES",
    "check_kernel_lemma",
    "omega_consistency_gap",
    "peano_kernel",
    "peano_kernel_lower",
    "Bdf2KernelRow",
    "bdf2_row",
    "bdf2_caputo",
    "integer_kernels",
    "step_ratios",
    "l1_entry_by_quadrature",
    "bdf2_entries_by_quadrature",
]
