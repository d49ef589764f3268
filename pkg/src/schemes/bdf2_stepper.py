"""Experimental variable-step fractional BDF2 scheme at integer levels.

    sum_k B^{(n)}_{n-k} (v^k - v^{k-1}) = kappa Delta_h u^n + f^n
    v^n = (1 + 2 r_n) / (tau_n (1 + r_n)) grad u^n - r_n^2 / (tau_n (1 + r_n)) grad u^{n-1}

with r_n = tau_n / tau_{n-1} and r_1 = 0. No convergence theory backs this
scheme; orders are measured only.
"""

import logging
import time
from typing import Optional

import numpy as np

from src.core.errors import ConfigurationError
from src.core.spacegrid import Grid2D, HelmholtzSolver
from src.core.timemesh import TimeMesh
from src.kernels import bdf2_row, step_ratios
from src.problems import ProblemSpec
from .states import SolutionReport, StepperOptions, StepSolveStats
from .l1_stepper import solve_checked

logger = logging.getLogger(__name__)

EXPERIMENTAL_NOTE = "experimental: no convergence theorem backs the BDF2 variant"


class _Bdf2State:
    """Minimal state for the residual check shared with the L1 stepper."""

    def __init__(self, solver: HelmholtzSolver, options: StepperOptions):
        self.solver = solver
        self.options = options
        self.n = 1


def bdf2_run(
    problem: ProblemSpec,
    mesh: TimeMesh,
    grid: Grid2D,
    options: Optional[StepperOptions] = None,
    include_correction: bool = True,
) -> SolutionReport:
    """March the BDF2 variant; linear problems only.

    Raises:
        ConfigurationError: the problem has a nonlinearity
        SolverError: residual above tolerance
    """
    options = options or StepperOptions()
    if not problem.is_linear:
        raise ConfigurationError("The BDF2 variant supports linear problems only")
    logger.warning("Running %s", EXPERIMENTAL_NOTE)

    alpha = problem.alpha
    # full Delta_h at integer levels: (c - kappa Delta_h) = (c - (2 kappa / 2) Delta_h)
    solver = HelmholtzSolver(
        grid, kappa=2.0 * problem.kappa, method=options.helmholtz_method, cg_rtol=options.cg_rtol
    )
    state = _Bdf2State(solver, options)
    r = step_ratios(mesh)
    N = mesh.N

    u_prev = problem.initial_value(grid)
    v_prev = problem.initial_velocity(grid)
    grad_u_prev = np.zeros(grid.shape)
    grad_v = np.empty((N, grid.M, grid.M))
    wanted = set(options.snapshots)
    snapshots = {0: u_prev.copy()} if 0 in wanted else {}
    stats = []

    for n in range(1, N + 1):
        start = time.perf_counter()
        state.n = n
        row = bdf2_row(mesh, alpha, n, include_correction=include_correction)
        B = row.B
        tau = mesh.tau[n - 1]
        rn = r[n - 1]
        d1 = (1.0 + 2.0 * rn) / (tau * (1.0 + rn))
        d2 = rn * rn / (tau * (1.0 + rn))

        history = np.zeros(grid.shape)
        if n >= 2:
            weights = B[1:n][::-1]
            history = (weights @ grad_v[: n - 1].reshape(n - 1, -1)).reshape(grid.shape)

        f_n = problem.forcing(grid, float(mesh.t[n]), n)
        c = B[0] * d1
        rhs = c * u_prev + B[0] * (d2 * grad_u_prev + v_prev) - history + f_n
        u, residual = solve_checked(state, c, rhs)

        grad_u = u - u_prev
        v = d1 * grad_u - d2 * grad_u_prev
        grad_v[n - 1] = v - v_prev
        u_prev, v_prev, grad_u_prev = u, v, grad_u

        stats.append(
            StepSolveStats(
                n=n,
                t=float(mesh.t[n]),
                tau=float(tau),
                picard_iterations=0,
                residual=residual,
                wall_ms=1e3 * (time.perf_counter() - start),
            )
        )
        if n in wanted:
            snapshots[n] = u.copy()

    return SolutionReport(
        scheme="bdf2",
        problem=problem.name,
        mesh=mesh,
        grid=grid,
        u_final=u_prev,
        stats=stats,
        snapshots=snapshots,
        v_final=v_prev,
        notes=[EXPERIMENTAL_NOTE],
    )


class Bdf2Stepper:
    """Service wrapper around bdf2_run() holding the numerical options."""

    def __init__(self, options: Optional[StepperOptions] = None):
        self.options = options or StepperOptions()

    def run(
        self,
        problem: ProblemSpec,
        mesh: TimeMesh,
        grid: Grid2D,
        include_correction: bool = True,
        **overrides,
    ) -> SolutionReport:
        options = self.options
        if overrides:
            options = StepperOptions(**{**vars(self.options), **overrides})
        return bdf2_run(problem, mesh, grid, options, include_correction=include_correction)
