"""Local consistency errors of the L1 formula for power functions v = t^sigma.

R^j = CD^alpha v(t_{j-1/2}) - D_tau^alpha v^{j-1/2}, weighted by the DCC kernels
and compared against the explicit factor-2 bound

    sum_j p^{(n)}_{n-j} |R^j| <= 2 sum_j p^{(n)}_{n-j} a^{(j)}_0 G^j,
    G^j = integral over [t_{j-3/2}, t_{j-1/2}] of (t - t_{j-3/2}) |v''(t)|.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
from scipy.integrate import quad

from src.core.errors import ConfigurationError
from src.core.timemesh import TimeMesh, graded_mesh
from src.kernels import L1KernelTable, dcc_matrix, dcc_rows, l1_matrix
from src.kernels.dcc import CLAMP_TOL
from src.kernels.weights import as_alpha
from src.problems import caputo_power

logger = logging.getLogger(__name__)

BOUND_RTOL = 1e-10
G_QUAD_EPSABS = 1e-13
ROUNDOFF_ULPS = 64.0


@dataclass
class TruncationReport:
    """Per-step weighted truncation errors against their bounds (index n - 1)."""

    N: int
    alpha: float
    sigma: float
    R: np.ndarray
    weighted: np.ndarray
    lemma_bound: np.ndarray
    corollary_bound: np.ndarray
    G: np.ndarray
    roundoff: np.ndarray
    gamma: Optional[float] = None
    notes: List[str] = field(default_factory=list)

    @property
    def max_weighted(self) -> float:
        return float(np.max(self.weighted))

    @property
    def bound_margins(self) -> np.ndarray:
        """Allowed slack minus the excess; non-negative where the bound holds."""
        allowed = self.lemma_bound * (1.0 + BOUND_RTOL) + self.roundoff
        return allowed - self.weighted

    @property
    def bound_holds(self) -> bool:
        return bool(np.all(self.bound_margins >= 0.0))

    @property
    def worst_ratio(self) -> float:
        """max_n weighted / bound over steps with a positive bound."""
        mask = self.lemma_bound > 0
        if not np.any(mask):
            return 0.0
        return float(np.max(self.weighted[mask] / self.lemma_bound[mask]))

    def rows(self) -> List[dict]:
        return [
            {
                "n": n + 1,
                "R": float(self.R[n]),
                "weighted": float(self.weighted[n]),
                "lemma_bound": float(self.lemma_bound[n]),
                "corollary_bound": float(self.corollary_bound[n]),
                "bound_holds": bool(self.bound_margins[n] >= 0.0),
            }
            for n in range(self.N)
        ]

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "alpha": self.alpha,
            "sigma": self.sigma,
            "gamma": self.gamma,
            "max_weighted": self.max_weighted,
            "worst_ratio": self.worst_ratio,
            "bound_holds": self.bound_holds,
            "notes": list(self.notes),
        }


def g_integrals(mesh: TimeMesh, sigma: float) -> np.ndarray:
    """G^j for v = t^sigma, j = 1..N.

    The first cell uses the closed form |sigma - 1| t_{1/2}^sigma; the others use
    adaptive quadrature.
    """
    s = mesh.s
    c_v = abs(sigma * (sigma - 1.0))
    G = np.empty(mesh.N)
    G[0] = abs(sigma - 1.0) * s[1] ** sigma
    if c_v == 0.0:
        G[1:] = 0.0
        return G
    for j in range(2, mesh.N + 1):
        lo, hi = s[j - 1], s[j]
        value, _ = quad(
            lambda t, lo=lo: (t - lo) * t ** (sigma - 2.0),
            lo,
            hi,
            epsabs=G_QUAD_EPSABS,
            epsrel=1e-12,
            limit=200,
        )
        G[j - 1] = c_v * value
    return G


def corollary_bound(mesh: TimeMesh, alpha: float, sigma: float) -> np.ndarray:
    """c_v (tau_1^sigma + max_{2<=j<=n} (s_j - s_1)^alpha s_{j-1}^(sigma-2) tau_{j-1/2}^(2-alpha) / (1 - alpha)).

    Reported next to the lemma bound; it does not hold for every sigma.
    """
    s = mesh.s
    c_v = abs(sigma * (sigma - 1.0))
    j = np.arange(2, mesh.N + 1)
    terms = (
        (s[j] - s[1]) ** alpha
        * s[j - 1] ** (sigma - 2.0)
        * (s[j] - s[j - 1]) ** (2.0 - alpha)
        / (1.0 - alpha)
    )
    running = np.concatenate([[0.0], np.maximum.accumulate(terms)]) if terms.size else np.zeros(1)
    return c_v * (mesh.tau[0] ** sigma + running)


def truncation_study(
    mesh: TimeMesh,
    alpha: float,
    sigma: float,
    clamp_tol: float = CLAMP_TOL,
    table: Optional[L1KernelTable] = None,
) -> TruncationReport:
    """Measure the DCC-weighted truncation errors of v = t^sigma on a mesh.

    Raises:
        ConfigurationError: sigma is not positive
    """
    alpha = as_alpha(alpha)
    if not sigma > 0:
        raise ConfigurationError(f"sigma must be positive, got {sigma}")
    table = table or L1KernelTable(mesh, alpha)
    a_rows = table.rows()
    A = l1_matrix(a_rows)
    P = dcc_matrix(dcc_rows(a_rows, clamp_tol=clamp_tol))
    N = mesh.N

    s = mesh.s
    exact = np.asarray(caputo_power(alpha, sigma, s[1:]), dtype=float)
    diffs = np.diff(s**sigma)
    R = np.empty(N)
    scale = np.empty(N)
    for n in range(1, N + 1):
        terms = A[n - 1, :n][::-1] * diffs[:n]
        discrete = math.fsum(terms)
        R[n - 1] = exact[n - 1] - discrete
        scale[n - 1] = abs(exact[n - 1]) + math.fsum(np.abs(terms))

    G = g_integrals(mesh, sigma)
    weighted = P @ np.abs(R)
    lemma = 2.0 * (P @ (A[:, 0] * G))
    roundoff = ROUNDOFF_ULPS * np.finfo(float).eps * (P @ scale)

    report = TruncationReport(
        N=N,
        alpha=alpha,
        sigma=sigma,
        R=R,
        weighted=weighted,
        lemma_bound=lemma,
        corollary_bound=corollary_bound(mesh, alpha, sigma),
        G=G,
        roundoff=roundoff,
    )
    logger.info(
        "Truncation N=%d alpha=%.3f sigma=%.3f: max weighted %.3e, worst ratio %.3f",
        N,
        alpha,
        sigma,
        report.max_weighted,
        report.worst_ratio,
    )
    if not report.bound_holds:
        bad = np.flatnonzero(report.bound_margins < 0) + 1
        logger.warning("Truncation bound violated at steps %s", bad.tolist())
    return report


@dataclass
class DecayFit:
    N: List[int]
    max_weighted: List[float]
    slope: float
    expected_rate: float
    constant: float

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "max_weighted": self.max_weighted,
            "slope": self.slope,
            "expected_rate": self.expected_rate,
            "constant": self.constant,
        }


def fit_decay(
    alpha: float,
    sigma: float,
    gamma: float,
    N_list: Sequence[int],
    T: float = 1.0,
    reports: Optional[List[TruncationReport]] = None,
) -> DecayFit:
    """Least-squares slope of log max_n sum_j p|R^j| against log N on graded meshes.

    The constant c of the graded-mesh estimate c N^(-min(gamma sigma, 2 - alpha)) is
    the largest max_weighted N^rate seen.
    """
    alpha = as_alpha(alpha)
    if len(N_list) < 2:
        raise ConfigurationError("A decay fit needs at least two meshes")
    if reports is None:
        reports = [truncation_study(graded_mesh(N, T, gamma), alpha, sigma) for N in N_list]
    values = np.array([r.max_weighted for r in reports])
    slope = float(np.polyfit(np.log(N_list), np.log(values), 1)[0])
    rate = min(gamma * sigma, 2.0 - alpha)
    constant = float(np.max(values * np.asarray(N_list, dtype=float) ** rate))
    logger.info("Truncation decay slope %.3f (predicted %.3f)", slope, -rate)
    return DecayFit(
        N=[int(N) for N in N_list],
        max_weighted=values.tolist(),
        slope=slope,
        expected_rate=rate,
        constant=constant,
    )


class TruncationStudy:
    """Truncation-error service: per-mesh reports and decay fits."""

    def __init__(self, clamp_tol: float = CLAMP_TOL):
        self.clamp_tol = clamp_tol

    def report(self, mesh: TimeMesh, alpha: float, sigma: float) -> TruncationReport:
        return truncation_study(mesh, alpha, sigma, self.clamp_tol)

    def graded(self, alpha: float, sigma: float, gamma: float, N: int, T: float = 1.0) -> TruncationReport:
        report = self.report(graded_mesh(N, T, gamma), alpha, sigma)
        report.gamma = gamma
        return report

    def decay(
        self, alpha: float, sigma: float, gamma: float, N_list: Sequence[int], T: float = 1.0
    ) -> DecayFit:
        reports = [self.graded(alpha, sigma, gamma, N, T) for N in N_list]
        return fit_decay(alpha, sigma, gamma, N_list, T, reports)
