"""Time marching of the order-reduced L1 scheme at half levels.

With v = u_t and alpha = beta - 1 each step solves

    D^alpha v^{n-1/2} = kappa Delta_h u^{n-1/2} - g(u^{n-1/2}) + f^{n-1/2},
    v^{n-1/2} = (u^n - u^{n-1}) / tau_n,

which, once v is eliminated, is one modified Helmholtz solve for u^n per step.
"""

import logging
import time
from typing import Optional, Tuple

import numpy as np

from src.core.errors import ConfigurationError, KernelError, PicardDivergenceError, SolverError
from src.core.spacegrid import Field2D, Grid2D, HelmholtzSolver, laplacian, norm_l2
from src.core.timemesh import TimeMesh
from src.kernels import L1KernelRow, L1KernelTable
from src.problems import ProblemSpec
from .states import SchemeState, SolutionReport, StepperOptions, StepSolveStats

logger = logging.getLogger(__name__)


def assemble_history(state: SchemeState, a_row: L1KernelRow) -> Field2D:
    """History part of the discrete Caputo sum for step n = state.n.

    H^n = sum_{k<n} a_{n-k} (w_k - w_{k-1}) - a_0 w_{n-1} with w_0 = v0, evaluated in
    the telescoped form sum_{k<n} (a_{n-k} - a_{n-k-1}) w_k - a_{n-1} v0.

    Raises:
        KernelError: the row is not the row of step n
    """
    n = state.n
    if a_row.n != n:
        raise KernelError(f"Kernel row {a_row.n} supplied for step {n}")
    a = a_row.a
    H = -a[n - 1] * state.v0
    if n >= 2:
        weights = (a[1:] - a[:-1])[::-1]
        H = H + (weights @ state.history_matrix()).reshape(state.grid.shape)
    return H


def _explicit_part(state: SchemeState, c: float, f_half: Field2D, H: Field2D) -> Field2D:
    u_prev = state.u_prev
    return c * u_prev + 0.5 * state.kappa * laplacian(state.grid, u_prev) + f_half - H


def solve_checked(state: SchemeState, c: float, rhs: Field2D) -> Tuple[Field2D, float]:
    u = state.solver.solve(c, rhs)
    residual = state.solver.residual(c, u, rhs)
    if residual > state.options.solver_rtol:
        raise SolverError(
            f"Step {state.n}: Helmholtz residual {residual:.3e} above "
            f"{state.options.solver_rtol:.1e}",
            residual=residual,
            step=state.n,
        )
    return u, residual


def step_linear(
    state: SchemeState, f_half: Field2D, a_row: Optional[L1KernelRow] = None
) -> Tuple[Field2D, StepSolveStats]:
    """Advance one step of the linear scheme.

    Solves (a_0/tau_n) u^n - (kappa/2) Delta_h u^n
        = (a_0/tau_n) u^{n-1} + (kappa/2) Delta_h u^{n-1} + f^{n-1/2} - H^n.

    Raises:
        SolverError: residual above the configured tolerance
    """
    start = time.perf_counter()
    n = state.n
    state.grid.check(f_half, "f_half")
    a_row = a_row or L1KernelTable(state.mesh, state.alpha, cache=False).row(n)
    tau = state.mesh.tau[n - 1]
    c = a_row.a[0] / tau
    H = assemble_history(state, a_row)
    u, residual = solve_checked(state, c, _explicit_part(state, c, f_half, H))
    state.append(u)
    stats = StepSolveStats(
        n=n,
        t=float(state.mesh.t[n]),
        tau=float(tau),
        picard_iterations=0,
        residual=residual,
        wall_ms=1e3 * (time.perf_counter() - start),
    )
    return u, stats


def step_semilinear(
    state: SchemeState,
    f_half: Field2D,
    eps: float = 1.0,
    nl: bool = True,
    tol: float = 1e-12,
    max_iter: int = 50,
    a_row: Optional[L1KernelRow] = None,
    lagged: bool = False,
) -> Tuple[Field2D, StepSolveStats]:
    """Advance one step of D^alpha v = eps^2 Delta u - u^3 + f.

    The cubic term is taken at the half level ((u^n + u^{n-1})/2)^3 and resolved by
    Picard iteration from u^{n,0} = u^{n-1}, stopping once
    ||u^{n,s+1} - u^{n,s}|| <= tol ||u^{n,s+1}||. With lagged=True the term is
    frozen at u^{n-1} and a single solve is made.

    Raises:
        PicardDivergenceError: no convergence within max_iter iterations
        SolverError: residual above the configured tolerance
    """
    if abs(state.kappa - eps**2) > 1e-15 * max(1.0, eps**2):
        raise ConfigurationError(
            f"State solver uses kappa={state.kappa}, step requested eps^2={eps**2}"
        )
    if not nl:
        return step_linear(state, f_half, a_row)

    start = time.perf_counter()
    n = state.n
    state.grid.check(f_half, "f_half")
    a_row = a_row or L1KernelTable(state.mesh, state.alpha, cache=False).row(n)
    tau = state.mesh.tau[n - 1]
    c = a_row.a[0] / tau
    base = _explicit_part(state, c, f_half, assemble_history(state, a_row))
    u_prev = state.u_prev

    if lagged:
        u, residual = solve_checked(state, c, base - u_prev**3)
        iterations = 1
    else:
        u_old = u_prev
        change = np.inf
        iterations = 0
        converged = False
        while iterations < max_iter:
            iterations += 1
            mid = 0.5 * (u_old + u_prev)
            u, residual = solve_checked(state, c, base - mid**3)
            change = norm_l2(state.grid, u - u_old)
            scale = norm_l2(state.grid, u)
            logger.debug("Step %d Picard %d: change %.3e", n, iterations, change)
            if change <= tol * scale:
                converged = True
                break
            u_old = u
        if not converged:
            raise PicardDivergenceError(
                f"Step {n}: Picard iteration stalled after {iterations} iterations "
                f"(last change {change:.3e})",
                residual=change,
                step=n,
                iterations=iterations,
            )

    state.append(u)
    stats = StepSolveStats(
        n=n,
        t=float(state.mesh.t[n]),
        tau=float(tau),
        picard_iterations=iterations,
        residual=residual,
        wall_ms=1e3 * (time.perf_counter() - start),
    )
    return u, stats


def initial_state(
    problem: ProblemSpec, mesh: TimeMesh, grid: Grid2D, options: StepperOptions
) -> SchemeState:
    solver = HelmholtzSolver(
        grid,
        kappa=problem.kappa,
        method=options.helmholtz_method,
        cg_rtol=options.cg_rtol,
    )
    return SchemeState(
        mesh,
        grid,
        problem.alpha,
        problem.initial_value(grid),
        problem.initial_velocity(grid),
        solver,
        options,
    )


def run(
    problem: ProblemSpec,
    mesh: TimeMesh,
    grid: Grid2D,
    options: Optional[StepperOptions] = None,
) -> SolutionReport:
    """March the half-level scheme over all N steps of the mesh.

    The velocity history needs N M^2 doubles of memory.
    """
    options = options or StepperOptions()
    if abs(mesh.T - problem.T) > 1e-12 * problem.T:
        logger.warning("Mesh ends at T=%g, problem is posed up to T=%g", mesh.T, problem.T)
    state = initial_state(problem, mesh, grid, options)
    kernels = L1KernelTable(mesh, problem.alpha, cache=options.cache_rows)
    wanted = set(options.snapshots)
    snapshots = {0: state.u_prev.copy()} if 0 in wanted else {}
    stats = []

    logger.info(
        "L1 run %s: beta=%.3f N=%d M=%d (%s)",
        problem.name,
        problem.beta,
        mesh.N,
        grid.M,
        "linear" if problem.is_linear else "cubic",
    )
    for n in range(1, mesh.N + 1):
        f_half = problem.forcing(grid, float(mesh.t_half[n - 1]), n)
        row = kernels.row(n)
        if problem.is_linear:
            u, step_stats = step_linear(state, f_half, row)
        else:
            u, step_stats = step_semilinear(
                state,
                f_half,
                eps=problem.eps,
                nl=True,
                tol=options.picard_tol,
                max_iter=options.picard_max_iter,
                a_row=row,
                lagged=options.lagged_nonlinearity,
            )
        stats.append(step_stats)
        if n in wanted:
            snapshots[n] = u.copy()

    return SolutionReport(
        scheme="l1",
        problem=problem.name,
        mesh=mesh,
        grid=grid,
        u_final=state.u_prev,
        stats=stats,
        snapshots=snapshots,
        v_final=state.velocity(),
        state=state if options.keep_state else None,
    )


class L1Stepper:
    """Service wrapper around run() holding the numerical options."""

    def __init__(self, options: Optional[StepperOptions] = None):
        self.options = options or StepperOptions()

    def run(self, problem: ProblemSpec, mesh: TimeMesh, grid: Grid2D, **overrides) -> SolutionReport:
        options = self.options
        if overrides:
            options = StepperOptions(**{**vars(self.options), **overrides})
        return run(problem, mesh, grid, options)
