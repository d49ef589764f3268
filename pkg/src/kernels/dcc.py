"""Discrete complementary convolution (DCC) kernels of the L1 rows."""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
from scipy.linalg import eigvalsh

from src.core.errors import KernelError
from .l1 import L1KernelRow, L1KernelTable, l1_matrix
from .weights import omega

logger = logging.getLogger(__name__)

CLAMP_TOL = 1e-14


@dataclass(frozen=True)
class DccKernelRow:
    """p[j] = p^{(n)}_j for j = 0..n-1."""

    n: int
    p: np.ndarray
    clamped: int = 0


@dataclass
class DccSummary:
    identity_residual: float
    sum_bound_margin: float
    psd_margin_p: float
    psd_margin_zeta: float
    orthogonality_residual: float
    clamped_entries: int
    min_entry: float
    per_row_sum: List[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "identity_residual": self.identity_residual,
            "sum_bound_margin": self.sum_bound_margin,
            "psd_margin_p": self.psd_margin_p,
            "psd_margin_zeta": self.psd_margin_zeta,
            "orthogonality_residual": self.orthogonality_residual,
            "clamped_entries": self.clamped_entries,
            "min_entry": self.min_entry,
        }


def _lag_matrix(rows: Sequence[L1KernelRow]) -> np.ndarray:
    if not rows:
        raise KernelError("At least one kernel row is required")
    A = l1_matrix(rows)
    if np.any(A[:, 0] <= 0):
        bad = int(np.argmin(A[:, 0])) + 1
        raise KernelError(f"Non-positive leading kernel a^({bad})_0 = {A[bad - 1, 0]}")
    return A


def _dcc_from_matrix(A: np.ndarray, n: int, clamp_tol: float) -> DccKernelRow:
    p = np.zeros(n)
    p[0] = 1.0 / A[n - 1, 0]
    clamped = 0
    for k in range(n - 1, 0, -1):
        j = np.arange(k + 1, n + 1)
        # a^{(j)}_{j-k-1} - a^{(j)}_{j-k}
        gaps = A[j - 1, j - k - 1] - A[j - 1, j - k]
        value = math.fsum(gaps * p[n - j]) / A[k - 1, 0]
        if value < 0.0:
            if value < -clamp_tol:
                raise KernelError(
                    f"DCC kernel p^({n})_{n - k} = {value:.3e} is negative; "
                    "the a-kernels are not monotone"
                )
            value = 0.0
            clamped += 1
        p[n - k] = value
    if clamped:
        logger.warning("Clamped %d round-off negative entries in DCC row %d", clamped, n)
    p.setflags(write=False)
    return DccKernelRow(n=n, p=p, clamped=clamped)


def dcc_row(
    rows: Sequence[L1KernelRow], n: Optional[int] = None, clamp_tol: float = CLAMP_TOL
) -> DccKernelRow:
    """DCC row p^{(n)} from the L1 rows of steps 1..n.

    Args:
        rows: consecutive rows starting at step 1
        n: step, defaults to the last row supplied
        clamp_tol: negative values above -clamp_tol are set to zero

    Raises:
        KernelError: missing rows, non-positive a_0 or a clearly negative entry
    """
    n = len(rows) if n is None else n
    if n < 1 or len(rows) < n:
        raise KernelError(f"DCC row {n} needs kernel rows 1..{n}, got {len(rows)}")
    A = _lag_matrix(rows[:n])
    return _dcc_from_matrix(A, n, clamp_tol)


def dcc_rows(
    rows: Sequence[L1KernelRow], clamp_tol: float = CLAMP_TOL
) -> List[DccKernelRow]:
    A = _lag_matrix(rows)
    return [_dcc_from_matrix(A, n, clamp_tol) for n in range(1, len(rows) + 1)]


def dcc_matrix(p_rows: Sequence[DccKernelRow]) -> np.ndarray:
    """P[n - 1, k - 1] = p^{(n)}_{n-k} for k <= n."""
    N = len(p_rows)
    P = np.zeros((N, N))
    for i, row in enumerate(p_rows):
        n = row.n
        P[i, :n] = row.p[::-1]
    return P


def zeta_matrix(a_rows: Sequence[L1KernelRow]) -> np.ndarray:
    """Z[k - 1, j - 1] = zeta^{(k)}_{k-j}: a_0 on the diagonal, a_{k-j} - a_{k-j-1} below."""
    A = l1_matrix(a_rows)
    N = len(a_rows)
    Z = np.zeros((N, N))
    for k in range(1, N + 1):
        Z[k - 1, k - 1] = A[k - 1, 0]
        j = np.arange(1, k)
        Z[k - 1, j - 1] = A[k - 1, k - j] - A[k - 1, k - j - 1]
    return Z


def verify_identity(
    p_rows: Sequence[DccKernelRow], a_rows: Sequence[L1KernelRow], n: int
) -> float:
    """max_k |sum_{j=k}^n p^{(n)}_{n-j} a^{(j)}_{j-k} - 1| over k = 1..n."""
    p = p_rows[n - 1].p
    A = l1_matrix(a_rows[:n])
    worst = 0.0
    for k in range(1, n + 1):
        j = np.arange(k, n + 1)
        total = math.fsum(p[n - j] * A[j - 1, j - k])
        worst = max(worst, abs(total - 1.0))
    return worst


def orthogonality_residual(
    p_rows: Sequence[DccKernelRow], a_rows: Sequence[L1KernelRow]
) -> float:
    """max |P Z - I|, the Kronecker form of the DCC identity."""
    P = dcc_matrix(p_rows)
    Z = zeta_matrix(a_rows[: len(p_rows)])
    return float(np.max(np.abs(P @ Z - np.eye(len(p_rows)))))


def positive_definiteness_margin(
    p_rows: Optional[Sequence[DccKernelRow]] = None,
    a_rows: Optional[Sequence[L1KernelRow]] = None,
    zeta: bool = False,
) -> float:
    """Smallest eigenvalue of the symmetric part of the P (or zeta) matrix."""
    if zeta:
        if a_rows is None:
            raise KernelError("The zeta margin needs the L1 rows")
        K = zeta_matrix(a_rows)
    else:
        if p_rows is None:
            raise KernelError("The DCC margin needs the DCC rows")
        K = dcc_matrix(p_rows)
    return float(eigvalsh(0.5 * (K + K.T))[0])


def quadratic_form(P: np.ndarray, w: np.ndarray) -> float:
    """sum_n w_n sum_{k<=n} P[n, k] w_k for a lower-triangular kernel matrix."""
    return float(w @ (np.tril(P) @ w))


def sum_bound_margins(
    p_rows: Sequence[DccKernelRow], t_half: np.ndarray, alpha: float
) -> np.ndarray:
    """omega_{1+alpha}(t_{n-1/2}) - sum_j p^{(n)}_{n-j}, per row."""
    sums = np.array([math.fsum(row.p) for row in p_rows])
    bounds = omega(1.0 + alpha, t_half[: len(p_rows)])
    return bounds - sums


def summarize(table: L1KernelTable, clamp_tol: float = CLAMP_TOL) -> DccSummary:
    """Identity, non-negativity, sum bound and PSD margins of a full mesh."""
    a_rows = table.rows()
    p_rows = dcc_rows(a_rows, clamp_tol=clamp_tol)
    N = len(a_rows)
    residual = max(verify_identity(p_rows, a_rows, n) for n in range(1, N + 1))
    margins = sum_bound_margins(p_rows, table.mesh.t_half, table.alpha)
    summary = DccSummary(
        identity_residual=residual,
        sum_bound_margin=float(np.min(margins)),
        psd_margin_p=positive_definiteness_margin(p_rows),
        psd_margin_zeta=positive_definiteness_margin(a_rows=a_rows, zeta=True),
        orthogonality_residual=orthogonality_residual(p_rows, a_rows),
        clamped_entries=sum(row.clamped for row in p_rows),
        min_entry=float(min(np.min(row.p) for row in p_rows)),
        per_row_sum=[float(math.fsum(row.p)) for row in p_rows],
    )
    logger.info(
        "DCC summary N=%d: identity %.2e, sum-bound margin %.2e, PSD %.2e / %.2e",
        N,
        summary.identity_residual,
        summary.sum_bound_margin,
        summary.psd_margin_p,
        summary.psd_margin_zeta,
    )
    return summary


def alpha_limit_probe(table: L1KernelTable) -> dict:
    """Compare p^{(n)}_{n-j} with tau_j and tau_{j-1/2} on the last row.

    Meaningful for alpha close to 1, where the backward Euler limit is approached.
    """
    p_rows = dcc_rows(table.rows())
    p_last = p_rows[-1].p[::-1]
    mesh = table.mesh
    return {
        "alpha": table.alpha,
        "max_rel_gap_tau": float(np.max(np.abs(p_last / mesh.tau - 1.0))),
        "max_rel_gap_tau_half": float(np.max(np.abs(p_last / mesh.tau_half - 1.0))),
    }
