"""Numerical checks of the structural inequalities of the L1 kernels.

Five families are checked row by row:

    I    positivity and monotone decay in lag
    II   a^{(n)}_k <= a^{(n-1)}_{k-1} and the log-convexity cross product
    III  rows shrink with n at fixed lag (needs non-decreasing steps)
    IV   ratio bound a^{(k)}_0 / a^{(k)}_{k-2}
    V    omega_{1-alpha} difference squeezed below the kernel gap

Margins are relative, (rhs - lhs) / max(|lhs|, |rhs|), and a check passes when
its worst margin is at least -tol.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Union

import numpy as np
from scipy.special import gamma as gamma_fn

from src.core.timemesh import TimeMesh
from .l1 import L1KernelTable, half_level_diffs
from .weights import FracOrder, as_alpha, omega, power_gap

logger = logging.getLogger(__name__)

LEMMA_TOL = 1e-13
PROPERTY_NAMES = ("I", "II", "III", "IV", "V")

DESCRIPTIONS = {
    "I": "a_k > 0 and a_k <= a_{k-1}",
    "II": "a^(n)_k <= a^(n-1)_{k-1} and a^(n-1)_{k-1} a^(n)_{k+1} >= a^(n-1)_k a^(n)_k",
    "III": "a^(n)_k <= a^(n-1)_k",
    "IV": "a^(k)_0 / a^(k)_{k-2} < (t_{k-1/2} - t_{1/2})^alpha / ((1-alpha) tau_{k-1/2}^alpha)",
    "V": "0 < omega_{1-alpha} difference <= a_{n-k-1} - a_{n-k}",
}


@dataclass
class PropertyCheck:
    name: str
    description: str
    worst_margin: float
    passed: bool
    checked: int
    skipped: bool = False
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "description": self.description,
            "worst_margin": None if math.isinf(self.worst_margin) else self.worst_margin,
            "passed": self.passed,
            "checked": self.checked,
            "skipped": self.skipped,
            "note": self.note,
        }


@dataclass
class LemmaReport:
    """Per-property results for rows 1..n of a mesh.

    margins[name][m - 1, j] holds the margin attached to entry a^{(m)}_j, NaN
    where the property does not apply.
    """

    n: int
    alpha: float
    tol: float
    properties: Dict[str, PropertyCheck]
    margins: Dict[str, np.ndarray] = field(repr=False)

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.properties.values())

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "alpha": self.alpha,
            "tolerance": -self.tol,
            "passed": self.passed,
            "properties": {k: v.to_dict() for k, v in self.properties.items()},
        }


def relative_margin(big, small) -> np.ndarray:
    big = np.asarray(big, dtype=float)
    small = np.asarray(small, dtype=float)
    scale = np.maximum(np.abs(big), np.abs(small))
    scale = np.where(scale > 0, scale, 1.0)
    return (big - small) / scale


def _finish(name: str, margins: np.ndarray, tol: float) -> PropertyCheck:
    checked = int(np.count_nonzero(~np.isnan(margins)))
    worst = float(np.nanmin(margins)) if checked else math.inf
    return PropertyCheck(
        name=name,
        description=DESCRIPTIONS[name],
        worst_margin=worst,
        passed=worst >= -tol,
        checked=checked,
    )


def check_kernel_lemma(
    mesh: TimeMesh,
    alpha: Union[float, FracOrder],
    n: Optional[int] = None,
    tol: float = LEMMA_TOL,
    table: Optional[L1KernelTable] = None,
) -> LemmaReport:
    """Check the five kernel properties on rows 1..n.

    Property III is skipped when the mesh has shrinking steps, since the
    inequality relies on non-decreasing steps.
    """
    alpha = as_alpha(alpha)
    n = mesh.N if n is None else n
    table = table or L1KernelTable(mesh, alpha, cache=True)
    A = table.matrix(n)
    s = mesh.s
    margins = {name: np.full((n, n), np.nan) for name in PROPERTY_NAMES}

    for m in range(1, n + 1):
        row = A[m - 1, :m]
        pos = np.where(row > 0, 1.0, -1.0)
        mono = np.concatenate(([np.inf], relative_margin(row[:-1], row[1:])))
        margins["I"][m - 1, :m] = np.minimum(pos, mono)

        if m >= 2:
            prev = A[m - 2, : m - 1]
            # III: lags 0..m-2
            margins["III"][m - 1, : m - 1] = relative_margin(prev, row[: m - 1])

            # IV: attached to lag m - 2 of row m
            lhs = row[0] / row[m - 2]
            rhs = (s[m] - s[1]) ** alpha / ((1.0 - alpha) * mesh.tau_half[m - 1] ** alpha)
            margins["IV"][m - 1, m - 2] = relative_margin(rhs, lhs)

        if m >= 3:
            k = np.arange(1, m - 1)
            first = relative_margin(prev[k - 1], row[k])
            second = relative_margin(prev[k - 1] * row[k + 1], prev[k] * row[k])
            margins["II"][m - 1, k] = np.minimum(first, second)

            # V: cells 2..m-1, attached to lag m - cell
            cell = np.arange(2, m)
            x = s[m] - s[cell - 1]
            d = s[cell] - s[cell - 1]
            middle = -power_gap(x, d, -alpha) / gamma_fn(1.0 - alpha)
            gap = row[m - cell - 1] - row[m - cell]
            positive = middle / omega(1.0 - alpha, s[m] - s[cell])
            margins["V"][m - 1, m - cell] = np.minimum(
                positive, relative_margin(gap, middle)
            )

    properties = {name: _finish(name, margins[name], tol) for name in PROPERTY_NAMES}

    if not mesh.satisfies_step_condition:
        bad = mesh.violations()
        margins["III"][:] = np.nan
        properties["III"] = PropertyCheck(
            name="III",
            description=DESCRIPTIONS["III"],
            worst_margin=math.inf,
            passed=True,
            checked=0,
            skipped=True,
            note=f"precondition violated: steps shrink at n={bad[0]}",
        )
        logger.warning("Skipping property III: steps shrink at n=%d", bad[0])

    for name, check in properties.items():
        logger.debug(
            "Property %s: worst margin %.3e over %d entries", name, check.worst_margin, check.checked
        )
    return LemmaReport(n=n, alpha=alpha, tol=tol, properties=properties, margins=margins)


def omega_consistency_gap(mesh: TimeMesh, alpha: Union[float, FracOrder]) -> np.ndarray:
    """sum_k a^{(n)}_{n-k} grad omega_{1+alpha}(t_{k-1/2}) - 1 for n = 1..N.

    The discrete operator overestimates the unit Caputo derivative of
    omega_{1+alpha}, so every entry is non-negative.
    """
    alpha = as_alpha(alpha)
    table = L1KernelTable(mesh, alpha)
    diffs = half_level_diffs(mesh, lambda t: omega(1.0 + alpha, t))
    gaps = np.empty(mesh.N)
    for n in range(1, mesh.N + 1):
        a = table.row(n).a
        gaps[n - 1] = math.fsum(a[::-1] * diffs[:n]) - 1.0
    return gaps


def peano_kernel(t: float, lam, lo: float, hi: float) -> np.ndarray:
    """Peano kernel of linear interpolation on [lo, hi].

    q(t) - (Pi q)(t) = integral of kernel(t, lam) q''(lam) over [lo, hi].
    """
    lam = np.asarray(lam, dtype=float)
    return np.maximum(t - lam, 0.0) - (t - lo) * (hi - lam) / (hi - lo)


def peano_kernel_lower(t: float, lam, lo: float, hi: float) -> np.ndarray:
    lam = np.asarray(lam, dtype=float)
    return -(hi - lam) * (t - lo) / (hi - lo)
