"""Temporal convergence studies on graded meshes.

e(N) is measured at t = T in both the max norm and the h^2-weighted L2 norm;
Order = log2(e(N) / e(2N)) between consecutive rows.
"""

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed

from src.core.errors import ConfigurationError, SolverError
from src.core.spacegrid import Grid2D, norm_l2, norm_max
from src.core.timemesh import graded_mesh
from src.problems import ProblemSpec
from src.schemes import StepperOptions, bdf2_run, run
from .reference import ReferenceColumn

logger = logging.getLogger(__name__)

EXACT_TOL = 1e-10
NORMS = ("max", "l2")
SCHEMES = ("l1", "bdf2")


def expected_order(beta: float, sigma: float, gamma: float) -> float:
    """Predicted temporal order min(gamma sigma, 3 - beta)."""
    if not 1.0 < beta < 2.0:
        raise ConfigurationError(f"beta must lie in (1, 2), got {beta}")
    if not sigma > 0:
        raise ConfigurationError(f"sigma must be positive, got {sigma}")
    if not gamma >= 1.0:
        raise ConfigurationError(f"gamma must be at least 1, got {gamma}")
    return min(gamma * sigma, 3.0 - beta)


def optimal_grading(beta: float, sigma: float) -> float:
    """Smallest grading exponent that reaches the order 3 - beta."""
    if not sigma > 0:
        raise ConfigurationError(f"sigma must be positive, got {sigma}")
    return max(1.0, (3.0 - beta) / sigma)


def log2_order(coarse: Optional[float], fine: Optional[float]) -> Optional[float]:
    if coarse is None or fine is None or not coarse > 0 or not fine > 0:
        return None
    if not (math.isfinite(coarse) and math.isfinite(fine)):
        return None
    return math.log2(coarse / fine)


@dataclass
class ConvergenceRow:
    N: int
    e_max: Optional[float]
    e_l2: Optional[float]
    expected_order: float
    order_max: Optional[float] = None
    order_l2: Optional[float] = None
    wall_ms: Optional[float] = None
    exact: bool = False
    failed: bool = False
    message: str = ""

    def error(self, norm: str) -> Optional[float]:
        return self.e_max if norm == "max" else self.e_l2

    def order(self, norm: str) -> Optional[float]:
        return self.order_max if norm == "max" else self.order_l2

    @property
    def status(self) -> str:
        if self.failed:
            return "failed"
        return "exact" if self.exact else "ok"


@dataclass
class ConvergenceTable:
    problem: str
    scheme: str
    beta: float
    sigma: Optional[float]
    gamma: float
    M: int
    norm: str
    rows: List[ConvergenceRow] = field(default_factory=list)

    @property
    def N_list(self) -> List[int]:
        return [row.N for row in self.rows]

    def errors(self, norm: Optional[str] = None) -> np.ndarray:
        norm = norm or self.norm
        return np.array(
            [np.nan if row.error(norm) is None else row.error(norm) for row in self.rows]
        )

    def orders(self, norm: Optional[str] = None) -> List[Optional[float]]:
        norm = norm or self.norm
        return [row.order(norm) for row in self.rows]

    @property
    def failed(self) -> bool:
        return any(row.failed for row in self.rows)

    def is_monotone(self, norm: Optional[str] = None) -> bool:
        e = self.errors(norm)
        return bool(np.all(e[1:] < e[:-1]))

    def csv_rows(self, record_timing: bool = False) -> List[dict]:
        """One CSV row per (N, norm)."""
        out = []
        for row in self.rows:
            for norm in NORMS:
                out.append(
                    {
                        "scheme": self.scheme,
                        "beta": self.beta,
                        "sigma": self.sigma,
                        "gamma": self.gamma,
                        "N": row.N,
                        "M": self.M,
                        "norm": norm,
                        "error": row.error(norm),
                        "order": row.order(norm),
                        "expected_order": row.expected_order,
                        "wall_ms": row.wall_ms if record_timing else None,
                        "status": row.status,
                    }
                )
        return out

    def to_dict(self) -> dict:
        return {
            "problem": self.problem,
            "scheme": self.scheme,
            "beta": self.beta,
            "sigma": self.sigma,
            "gamma": self.gamma,
            "M": self.M,
            "norm": self.norm,
            "N": self.N_list,
            "e_max": [row.e_max for row in self.rows],
            "e_l2": [row.e_l2 for row in self.rows],
            "order_max": [row.order_max for row in self.rows],
            "order_l2": [row.order_l2 for row in self.rows],
            "status": [row.status for row in self.rows],
        }


def check_doubling(N_list: Sequence[int]) -> List[int]:
    """Validate an ascending list in which every entry doubles the previous one.

    Raises:
        ConfigurationError: empty, non-positive or not doubling
    """
    N_list = [int(N) for N in N_list]
    if not N_list:
        raise ConfigurationError("N_list must not be empty")
    if N_list[0] < 1:
        raise ConfigurationError(f"N_list entries must be positive, got {N_list[0]}")
    for coarse, fine in zip(N_list, N_list[1:]):
        if fine != 2 * coarse:
            raise ConfigurationError(
                f"N_list must double at each entry, found {coarse} followed by {fine}"
            )
    return N_list


def run_scheme(problem: ProblemSpec, mesh, grid: Grid2D, scheme: str, options: StepperOptions):
    if scheme == "l1":
        return run(problem, mesh, grid, options)
    if scheme == "bdf2":
        return bdf2_run(problem, mesh, grid, options)
    raise ConfigurationError(f"Unknown scheme {scheme!r}; choose from {SCHEMES}")


def _single_run(
    problem: ProblemSpec, gamma: float, N: int, M: int, scheme: str, options: StepperOptions
) -> Dict[str, object]:
    start = time.perf_counter()
    mesh = graded_mesh(N, problem.T, gamma)
    grid = Grid2D(M, problem.L)
    try:
        report = run_scheme(problem, mesh, grid, scheme, options)
    except SolverError as exc:
        logger.error("Run N=%d M=%d failed: %s", N, M, exc)
        return {"N": N, "failed": True, "message": str(exc), "u": None}
    exact = problem.exact(grid, mesh.T)
    e_max, e_l2 = report.errors(exact)
    wall_ms = 1e3 * (time.perf_counter() - start)
    logger.info("N=%d M=%d: e_max=%.3e e_l2=%.3e (%.0f ms)", N, M, e_max, e_l2, wall_ms)
    return {
        "N": N,
        "failed": False,
        "e_max": e_max,
        "e_l2": e_l2,
        "wall_ms": wall_ms,
        "u": report.u_final,
    }


def _parallel_runs(
    problem: ProblemSpec,
    gamma: float,
    N_list: Sequence[int],
    M: int,
    scheme: str,
    options: StepperOptions,
    threads: int,
) -> List[Dict[str, object]]:
    if threads <= 1 or len(N_list) == 1:
        return [_single_run(problem, gamma, N, M, scheme, options) for N in N_list]
    results = Parallel(n_jobs=min(threads, len(N_list)))(
        delayed(_single_run)(problem, gamma, N, M, scheme, options) for N in N_list
    )
    # Parallel preserves submission order
    return list(results)


def convergence_study(
    problem: ProblemSpec,
    gamma: float,
    N_list: Sequence[int],
    M: int,
    norm: str = "max",
    scheme: str = "l1",
    options: Optional[StepperOptions] = None,
    threads: int = 1,
) -> ConvergenceTable:
    """Run the scheme for each N on graded meshes and tabulate errors and orders.

    Args:
        problem: a problem with a known exact solution
        gamma: grading exponent
        N_list: ascending, doubling step counts
        M: grid points per direction
        norm: primary norm of the table ("max" or "l2"); both are always computed
        scheme: "l1" or "bdf2"
        threads: worker processes for independent runs

    Raises:
        ConfigurationError: bad N_list, norm, scheme or a problem without exact solution
    """
    N_list = check_doubling(N_list)
    if norm not in NORMS:
        raise ConfigurationError(f"norm must be one of {NORMS}, got {norm!r}")
    if problem.exact_u is None:
        raise ConfigurationError(f"Problem {problem.name} has no exact solution")
    options = options or StepperOptions()
    sigma = problem.sigma
    predicted = expected_order(problem.beta, sigma, gamma) if sigma is not None else math.nan

    logger.info(
        "Convergence study %s/%s: beta=%.3f sigma=%s gamma=%g N=%s M=%d",
        problem.name,
        scheme,
        problem.beta,
        sigma,
        gamma,
        N_list,
        M,
    )
    results = _parallel_runs(problem, gamma, N_list, M, scheme, options, threads)

    table = ConvergenceTable(
        problem=problem.name,
        scheme=scheme,
        beta=problem.beta,
        sigma=sigma,
        gamma=gamma,
        M=M,
        norm=norm,
    )
    previous: Optional[ConvergenceRow] = None
    for result in results:
        if result["failed"]:
            row = ConvergenceRow(
                N=result["N"],
                e_max=None,
                e_l2=None,
                expected_order=predicted,
                failed=True,
                message=str(result["message"]),
            )
        else:
            row = ConvergenceRow(
                N=result["N"],
                e_max=result["e_max"],
                e_l2=result["e_l2"],
                expected_order=predicted,
                wall_ms=result["wall_ms"],
                exact=result["e_max"] < EXACT_TOL,
            )
            if previous is not None and not previous.failed:
                if row.exact and previous.exact:
                    row.order_max = row.order_l2 = None
                else:
                    row.order_max = log2_order(previous.e_max, row.e_max)
                    row.order_l2 = log2_order(previous.e_l2, row.e_l2)
        table.rows.append(row)
        previous = row
    return table


def self_convergence(
    problem: ProblemSpec,
    gamma: float,
    N_list: Sequence[int],
    M: int,
    scheme: str = "l1",
    options: Optional[StepperOptions] = None,
    threads: int = 1,
) -> Tuple[np.ndarray, List[Optional[float]]]:
    """Max-norm differences d(N) = |U_N - U_2N| at t = T and their log2 orders.

    Both runs share the grid, so the spatial error cancels from d(N).
    """
    N_list = check_doubling(N_list)
    options = options or StepperOptions()
    runs = N_list + [2 * N_list[-1]]
    results = _parallel_runs(problem, gamma, runs, M, scheme, options, threads)
    failed = [r["N"] for r in results if r["failed"]]
    if failed:
        raise SolverError(f"Self-convergence runs failed for N={failed}")
    d = np.array([norm_max(a["u"] - b["u"]) for a, b in zip(results, results[1:])])
    orders = [None] + [log2_order(d[i - 1], d[i]) for i in range(1, len(d))]
    return d, orders


def estimate_spatial_floor(
    problem: ProblemSpec,
    gamma: float,
    N: int,
    M: int,
    scheme: str = "l1",
    options: Optional[StepperOptions] = None,
) -> float:
    """Spatial error at grid M from a Richardson comparison with grid M/2.

    The M/2 nodes are every second node of the M grid; with a second order
    Laplacian |U_{M/2} - U_M| is about three times the spatial error at M.

    Raises:
        ConfigurationError: M/2 is not an admissible grid size
    """
    if M % 4 != 0 or M < 8:
        raise ConfigurationError(f"The spatial floor probe needs M divisible by 4 and >= 8, got {M}")
    options = options or StepperOptions()
    mesh = graded_mesh(N, problem.T, gamma)
    fine = run_scheme(problem, mesh, Grid2D(M, problem.L), scheme, options).u_final
    coarse = run_scheme(problem, mesh, Grid2D(M // 2, problem.L), scheme, options).u_final
    floor = norm_max(fine[::2, ::2] - coarse) / 3.0
    logger.info("Spatial floor at M=%d, N=%d: %.3e", M, N, floor)
    return floor


def calibrate_norm(table: ConvergenceTable, reference: ReferenceColumn) -> Tuple[str, Dict[str, float]]:
    """Norm whose errors lie closest (mean |log ratio|) to a reference column."""
    distances = {}
    for norm in NORMS:
        gaps = []
        for row in table.rows:
            ref = reference.error_at(row.N)
            value = row.error(norm)
            if ref is None or value is None or not value > 0:
                continue
            gaps.append(abs(math.log(value / ref)))
        distances[norm] = float(np.mean(gaps)) if gaps else math.inf
    chosen = min(NORMS, key=lambda n: distances[n])
    logger.info("Calibrated norm %s (log distances %s)", chosen, distances)
    return chosen, distances


@dataclass
class AcceptanceCriterion:
    name: str
    N: int
    computed: Optional[float]
    reference: float
    tolerance: float
    passed: bool
    kind: str
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "N": self.N,
            "computed": self.computed,
            "reference": self.reference,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "kind": self.kind,
            "note": self.note,
        }


def compare_with_reference(
    table: ConvergenceTable,
    reference: ReferenceColumn,
    norm: Optional[str] = None,
    rel_tol: float = 0.1,
    order_tol: float = 0.1,
    spatial_floor: float = 0.0,
) -> List[AcceptanceCriterion]:
    """Per-entry comparison against a published column.

    Entries whose reference error is not above ten times the spatial floor are
    validated by their order only.
    """
    norm = norm or table.norm
    criteria = []
    for row in table.rows:
        ref_error = reference.error_at(row.N)
        if ref_error is None:
            continue
        computed = row.error(norm)
        if ref_error > 10.0 * spatial_floor:
            ok = computed is not None and abs(computed / ref_error - 1.0) <= rel_tol
            criteria.append(
                AcceptanceCriterion(
                    name=f"error N={row.N}",
                    N=row.N,
                    computed=computed,
                    reference=ref_error,
                    tolerance=rel_tol,
                    passed=ok,
                    kind="value",
                )
            )
        ref_order = reference.order_at(row.N)
        if ref_order is not None and row.order(norm) is not None:
            order = row.order(norm)
            criteria.append(
                AcceptanceCriterion(
                    name=f"order N={row.N}",
                    N=row.N,
                    computed=order,
                    reference=ref_order,
                    tolerance=order_tol,
                    passed=abs(order - ref_order) <= order_tol,
                    kind="order",
                    note="" if ref_error > 10.0 * spatial_floor else "below spatial floor",
                )
            )
    return criteria


def compare_schemes(
    problem: ProblemSpec,
    gamma: float,
    N_list: Sequence[int],
    M: int,
    norm: str = "max",
    options: Optional[StepperOptions] = None,
    threads: int = 1,
) -> Dict[str, ConvergenceTable]:
    """L1 and BDF2 convergence tables on identical configurations."""
    return {
        scheme: convergence_study(problem, gamma, N_list, M, norm, scheme, options, threads)
        for scheme in SCHEMES
    }


class ConvergenceHarness:
    """Convergence service bound to stepper options and a worker cap."""

    def __init__(
        self,
        options: Optional[StepperOptions] = None,
        threads: int = 1,
        rel_tol: float = 0.1,
        order_tol: float = 0.1,
    ):
        self.options = options or StepperOptions()
        self.threads = max(1, int(threads))
        self.rel_tol = rel_tol
        self.order_tol = order_tol

    def study(
        self,
        problem: ProblemSpec,
        gamma: float,
        N_list: Sequence[int],
        M: int,
        norm: str = "max",
        scheme: str = "l1",
    ) -> ConvergenceTable:
        return convergence_study(
            problem, gamma, N_list, M, norm, scheme, self.options, self.threads
        )

    def compare_schemes(
        self, problem: ProblemSpec, gamma: float, N_list: Sequence[int], M: int, norm: str = "max"
    ) -> Dict[str, ConvergenceTable]:
        return compare_schemes(problem, gamma, N_list, M, norm, self.options, self.threads)

    def spatial_floor(self, problem: ProblemSpec, gamma: float, N: int, M: int) -> float:
        return estimate_spatial_floor(problem, gamma, N, M, options=self.options)

    def acceptance(
        self,
        table: ConvergenceTable,
        reference: ReferenceColumn,
        spatial_floor: float = 0.0,
        calibrate: bool = True,
    ) -> dict:
        norm = table.norm
        distances: Dict[str, float] = {}
        if calibrate:
            norm, distances = calibrate_norm(table, reference)
        criteria = compare_with_reference(
            table, reference, norm, self.rel_tol, self.order_tol, spatial_floor
        )
        return {
            "reference_table": reference.table,
            "beta": reference.beta,
            "gamma": reference.gamma,
            "norm": norm,
            "norm_log_distances": distances,
            "spatial_floor": spatial_floor,
            "criteria": [c.to_dict() for c in criteria],
            "passed": all(c.passed for c in criteria),
        }
