"""State and report types shared by the time steppers."""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from src.core.errors import GridError
from src.core.spacegrid import Field2D, Grid2D, HelmholtzSolver, norm_l2, norm_max
from src.core.timemesh import TimeMesh


@dataclass
class StepperOptions:
    """Numerical options of a run; built from SolverConfig/KernelConfig by the container."""

    solver_rtol: float = 1e-10
    picard_tol: float = 1e-12
    picard_max_iter: int = 50
    lagged_nonlinearity: bool = False
    helmholtz_method: str = "fft"
    cg_rtol: float = 1e-12
    cache_rows: bool = False
    snapshots: Sequence[int] = ()
    keep_state: bool = False  # attach the final SchemeState to the report


@dataclass
class StepSolveStats:
    n: int
    t: float
    tau: float
    picard_iterations: int
    residual: float
    wall_ms: float

    def as_row(self, record_timing: bool = False) -> dict:
        return {
            "n": self.n,
            "t_n": self.t,
            "tau_n": self.tau,
            "picard_iters": self.picard_iterations,
            "residual": self.residual,
            "wall_ms": self.wall_ms if record_timing else None,
        }


class SchemeState:
    """Marching state of the half-level scheme.

    n is the step about to be taken. The velocity history w_k = (u^k - u^{k-1}) / tau_k,
    k = 1..n-1, lives in a preallocated (N, M, M) buffer; entries are never
    rewritten once appended.
    """

    def __init__(
        self,
        mesh: TimeMesh,
        grid: Grid2D,
        alpha: float,
        u0: Field2D,
        v0: Field2D,
        solver: HelmholtzSolver,
        options: Optional[StepperOptions] = None,
    ):
        grid.check(u0, "u0")
        grid.check(v0, "v0")
        self.mesh = mesh
        self.grid = grid
        self.alpha = alpha
        self.solver = solver
        self.options = options or StepperOptions()
        self.n = 1
        self.u_prev = np.array(u0, dtype=float)
        self.v0 = np.array(v0, dtype=float)
        self._history = np.empty((mesh.N, grid.M, grid.M))

    @property
    def kappa(self) -> float:
        return self.solver.kappa

    @property
    def w_hist(self) -> np.ndarray:
        view = self._history[: self.n - 1]
        view.flags.writeable = False
        return view

    def history_matrix(self) -> np.ndarray:
        """History as an (n-1, M*M) matrix."""
        return self._history[: self.n - 1].reshape(self.n - 1, -1)

    def append(self, u_new: Field2D) -> Field2D:
        """Record u^n, push w_n and advance to step n + 1."""
        if self.n > self.mesh.N:
            raise GridError(f"Mesh has only {self.mesh.N} steps")
        w = (u_new - self.u_prev) / self.mesh.tau[self.n - 1]
        self._history[self.n - 1] = w
        self.u_prev = u_new
        self.n += 1
        return w

    def velocity(self) -> Field2D:
        """Integer-level velocity v^{n-1} rebuilt as v^k = 2 w_k - v^{k-1}."""
        v = self.v0.copy()
        for k in range(self.n - 1):
            v = 2.0 * self._history[k] - v
        return v

    @classmethod
    def from_snapshots(
        cls,
        levels: Sequence[Field2D],
        v0: Field2D,
        mesh: TimeMesh,
        grid: Grid2D,
        alpha: float,
        solver: HelmholtzSolver,
        options: Optional[StepperOptions] = None,
    ) -> "SchemeState":
        """Rebuild the state after len(levels) - 1 steps from u^0, u^1, ..."""
        state = cls(mesh, grid, alpha, levels[0], v0, solver, options)
        for u in levels[1:]:
            state.append(np.array(u, dtype=float))
        return state


@dataclass
class SolutionReport:
    """Outcome of a full run."""

    scheme: str
    problem: str
    mesh: TimeMesh
    grid: Grid2D
    u_final: Field2D
    stats: List[StepSolveStats] = field(default_factory=list)
    snapshots: Dict[int, Field2D] = field(default_factory=dict)
    v_final: Optional[Field2D] = None
    notes: List[str] = field(default_factory=list)
    state: Optional[SchemeState] = field(default=None, repr=False)

    @property
    def N(self) -> int:
        return self.mesh.N

    @property
    def total_picard_iterations(self) -> int:
        return sum(s.picard_iterations for s in self.stats)

    @property
    def max_residual(self) -> float:
        return max((s.residual for s in self.stats), default=0.0)

    def errors(self, exact: Optional[Field2D]) -> tuple[float, float]:
        """(max-norm error, L2 error) of u^N against an exact field."""
        if exact is None:
            return (float("nan"), float("nan"))
        diff = self.u_final - exact
        return norm_max(diff), norm_l2(self.grid, diff)

    def summary(self, exact: Optional[Field2D] = None, record_timing: bool = False) -> dict:
        e_max, e_l2 = self.errors(exact)
        out = {
            "scheme": self.scheme,
            "problem": self.problem,
            "N": self.N,
            "M": self.grid.M,
            "T": self.mesh.T,
            "u_final_max": norm_max(self.u_final),
            "u_final_l2": norm_l2(self.grid, self.u_final),
            "e_max": None if e_max != e_max else e_max,
            "e_l2": None if e_l2 != e_l2 else e_l2,
            "picard_iterations": self.total_picard_iterations,
            "max_residual": self.max_residual,
            "notes": list(self.notes),
        }
        if record_timing:
            out["wall_ms"] = sum(s.wall_ms for s in self.stats)
        return out
