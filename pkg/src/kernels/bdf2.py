"""Variable-step fractional BDF2 coefficients on integer time levels.

The operator is sum_k B^{(n)}_{n-k} (v^k - v^{k-1}). On each cell v is replaced
by a quadratic: cells 1..n-1 use the forward stencil t_{k-1}, t_k, t_{k+1}, the
last cell uses the backward stencil t_{n-2}, t_{n-1}, t_n. Each quadratic adds
a correction weighted by varpi to the plain integer-level L1 kernels abar.
"""

import logging
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.special import gamma as gamma_fn

from src.core.errors import KernelError
from src.core.timemesh import TimeMesh
from .weights import FracOrder, as_alpha, power_gap

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Bdf2KernelRow:
    """B[j] = B^{(n)}_j with the abar and varpi rows it was built from."""

    n: int
    B: np.ndarray
    abar: np.ndarray
    varpi: np.ndarray


def step_ratios(mesh: TimeMesh) -> np.ndarray:
    """r[n - 1] = tau_n / tau_{n-1}; r_1 is set to 0."""
    r = np.zeros(mesh.N)
    r[1:] = mesh.tau[1:] / mesh.tau[:-1]
    return r


def integer_kernels(mesh: TimeMesh, alpha: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form (abar, varpi) of step n, both indexed by lag."""
    p = 1.0 - alpha
    k = np.arange(1, n + 1)
    x1 = mesh.t[n] - mesh.t[k - 1]
    x0 = mesh.t[n] - mesh.t[k]
    tau = mesh.tau[k - 1]

    g2 = power_gap(x1, tau, p) / gamma_fn(2.0 - alpha)
    g3 = power_gap(x1, tau, p + 1.0) / gamma_fn(3.0 - alpha)
    abar = g2 / tau
    # (1/tau^2) * integral over [x0, x1] of (x0 + x1 - 2x) omega_{1-alpha}(x) dx
    varpi = ((x0 + x1) * g2 - 2.0 * p * g3) / tau**2
    return abar[::-1].copy(), varpi[::-1].copy()


def bdf2_row(
    mesh: TimeMesh,
    alpha: Union[float, FracOrder],
    n: int,
    include_correction: bool = True,
) -> Bdf2KernelRow:
    """BDF2 row of step n.

    Args:
        mesh: time mesh
        alpha: reduced order
        n: step index in 1..N
        include_correction: when False the varpi terms are dropped and the row
            equals abar

    Raises:
        KernelError: n out of range
    """
    if not 1 <= n <= mesh.N:
        raise KernelError(f"Step index n={n} out of range 1..{mesh.N}")
    alpha = as_alpha(alpha)
    abar, varpi = integer_kernels(mesh, alpha, n)
    B = abar.copy()
    if include_correction and n >= 2:
        r = step_ratios(mesh)
        # forward quadratic on cells k = 1..n-1
        for k in range(1, n):
            rk = r[k]  # r_{k+1}
            w = varpi[n - k]
            B[n - k] -= w / (1.0 + rk)
            B[n - k - 1] += w / (rk * (1.0 + rk))
        # backward quadratic on the last cell
        rn = r[n - 1]
        B[0] += varpi[0] * rn / (1.0 + rn)
        B[1] -= varpi[0] * rn * rn / (1.0 + rn)
    for arr in (B, abar, varpi):
        arr.setflags(write=False)
    return Bdf2KernelRow(n=n, B=B, abar=abar, varpi=varpi)


def bdf2_caputo(row: Bdf2KernelRow, diffs) -> float:
    """sum_k B^{(n)}_{n-k} diffs[k - 1] for integer-level differences v^k - v^{k-1}."""
    diffs = np.asarray(diffs, dtype=float)
    if diffs.shape[0] != row.n:
        raise KernelError(f"Row {row.n} needs {row.n} differences, got {diffs.shape[0]}")
    return float(np.dot(row.B[::-1], diffs))
