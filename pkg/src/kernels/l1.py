"""L1-type kernels of the discrete Caputo operator at half time levels.

For step n the kernel row holds a^{(n)}_j, j = 0..n-1, indexed by lag, with

    a^{(n)}_{n-k} = [w(s_n - s_{k-1}) - w(s_n - s_k)] / (s_k - s_{k-1})

where w = omega_{2-alpha} and s is the extended half grid of the mesh
(s_0 = t_0, s_n = t_{n-1/2}). The last cell gives a^{(n)}_0 = w(tau_{n-1/2}) / tau_{n-1/2}.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
from scipy.special import gamma as gamma_fn

from src.core.errors import KernelError
from src.core.timemesh import TimeMesh
from .weights import FracOrder, as_alpha, power_gap

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class L1KernelRow:
    """Kernel row of step n; a[j] = a^{(n)}_j."""

    n: int
    a: np.ndarray

    def __post_init__(self):
        if len(self.a) != self.n:
            raise KernelError(f"Row {self.n} must hold {self.n} entries, got {len(self.a)}")

    def __len__(self) -> int:
        return self.n


def _check_step(mesh: TimeMesh, n: int) -> None:
    if not 1 <= n <= mesh.N:
        raise KernelError(f"Step index n={n} out of range 1..{mesh.N}")


def _row_values(s: np.ndarray, alpha: float, n: int) -> np.ndarray:
    p = 1.0 - alpha
    k = np.arange(1, n + 1)
    x = s[n] - s[k - 1]
    d = s[k] - s[k - 1]
    by_cell = power_gap(x, d, p) / (gamma_fn(2.0 - alpha) * d)
    # cell k sits at lag n - k
    return by_cell[::-1].copy()


def l1_row(mesh: TimeMesh, alpha: Union[float, FracOrder], n: int) -> L1KernelRow:
    """Closed-form kernel row a^{(n)}_j, j = 0..n-1.

    Raises:
        KernelError: n outside 1..N
    """
    _check_step(mesh, n)
    a = _row_values(mesh.s, as_alpha(alpha), n)
    a.setflags(write=False)
    return L1KernelRow(n=n, a=a)


class L1KernelTable:
    """All rows 1..N of a mesh, optionally computed once and kept.

    Rows are produced on demand; with cache=True every row is stored after its
    first evaluation, which the property checks and the DCC construction rely on.
    """

    def __init__(
        self, mesh: TimeMesh, alpha: Union[float, FracOrder], cache: bool = True
    ):
        self.mesh = mesh
        self.alpha = as_alpha(alpha)
        self.cache = cache
        self._rows: Dict[int, L1KernelRow] = {}

    @property
    def N(self) -> int:
        return self.mesh.N

    def row(self, n: int) -> L1KernelRow:
        if n in self._rows:
            return self._rows[n]
        row = l1_row(self.mesh, self.alpha, n)
        if self.cache:
            self._rows[n] = row
        return row

    def rows(self, upto: Optional[int] = None) -> List[L1KernelRow]:
        upto = self.N if upto is None else upto
        return [self.row(n) for n in range(1, upto + 1)]

    def matrix(self, upto: Optional[int] = None) -> np.ndarray:
        """Lag layout: A[n - 1, j] = a^{(n)}_j, zero for j >= n."""
        return l1_matrix(self.rows(upto))


def l1_matrix(rows: Sequence[L1KernelRow]) -> np.ndarray:
    N = len(rows)
    A = np.zeros((N, N))
    for i, row in enumerate(rows):
        if row.n != i + 1:
            raise KernelError(f"Rows must be consecutive from 1, found n={row.n} at {i + 1}")
        A[i, : row.n] = row.a
    return A


def discrete_caputo(
    rows: Union[L1KernelRow, Sequence[L1KernelRow]], diffs: Sequence[float]
) -> float:
    """Discrete Caputo value sum_k a^{(n)}_{n-k} diffs[k], k = 1..n.

    Args:
        rows: the row of step n, or the row history whose last entry is step n
        diffs: backward differences of half-level samples, diffs[k - 1] for k = 1..n,
            the first being v^{1/2} - v^0

    Raises:
        KernelError: length mismatch
    """
    row = rows if isinstance(rows, L1KernelRow) else rows[-1]
    diffs = np.asarray(diffs, dtype=float)
    if diffs.shape[0] != row.n:
        raise KernelError(
            f"Row {row.n} needs {row.n} differences, got {diffs.shape[0]}"
        )
    # diffs run k = 1..n, the row runs lag 0..n-1
    return float(math.fsum(row.a[::-1] * diffs))


def half_level_diffs(mesh: TimeMesh, v, n: Optional[int] = None) -> np.ndarray:
    """Differences v(s_k) - v(s_{k-1}), k = 1..n, for a callable v."""
    n = mesh.N if n is None else n
    values = np.array([v(x) for x in mesh.s[: n + 1]], dtype=float)
    return np.diff(values)
