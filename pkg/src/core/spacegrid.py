"""Periodic uniform 2D grids, the 5-point Laplacian and the implicit-step solve."""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Literal

import numpy as np
from scipy import fft
from scipy.sparse.linalg import LinearOperator, cg

from .errors import ConfigurationError, GridError, IndefiniteOperatorError, SolverError

logger = logging.getLogger(__name__)

Field2D = np.ndarray
HelmholtzMethod = Literal["fft", "cg"]


@dataclass(frozen=True)
class Grid2D:
    """M x M nodes x_i = i h on [0, L)^2, periodic in both directions."""

    M: int
    L: float = 2.0 * np.pi

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 4 or self.M % 2:
            raise GridError(f"M must be an even integer >= 4, got {self.M}")
        if not self.L > 0:
            raise GridError(f"L must be positive, got {self.L}")

    @property
    def h(self) -> float:
        return self.L / self.M

    @property
    def shape(self) -> tuple[int, int]:
        return (self.M, self.M)

    @cached_property
    def nodes(self) -> np.ndarray:
        return np.arange(self.M) * self.h

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Coordinate arrays X, Y with X[i, j] = x_i and Y[i, j] = y_j."""
        return np.meshgrid(self.nodes, self.nodes, indexing="ij")

    def sample(self, fn, *args) -> Field2D:
        X, Y = self.mesh()
        return np.asarray(fn(X, Y, *args), dtype=float) * np.ones(self.shape)

    def zeros(self) -> Field2D:
        return np.zeros(self.shape)

    @cached_property
    def laplacian_symbol(self) -> np.ndarray:
        """Eigenvalues of -Delta_h on the rfft2 layout, (4/h^2)(sin^2 + sin^2)."""
        p = np.arange(self.M)
        q = np.arange(self.M // 2 + 1)
        sx = np.sin(np.pi * p / self.M) ** 2
        sy = np.sin(np.pi * q / self.M) ** 2
        return (4.0 / self.h**2) * (sx[:, None] + sy[None, :])

    def check(self, u: Field2D, name: str = "field") -> Field2D:
        if np.shape(u) != self.shape:
            raise GridError(f"{name} has shape {np.shape(u)}, grid expects {self.shape}")
        return u


def laplacian(grid: Grid2D, u: Field2D) -> Field2D:
    """5-point periodic Laplacian."""
    grid.check(u)
    return (
        np.roll(u, 1, axis=0)
        + np.roll(u, -1, axis=0)
        + np.roll(u, 1, axis=1)
        + np.roll(u, -1, axis=1)
        - 4.0 * u
    ) / grid.h**2


def inner(grid: Grid2D, u: Field2D, v: Field2D) -> float:
    """(u, v) = h^2 sum u v; numpy's pairwise reduction fixes the summation order."""
    grid.check(u, "u")
    grid.check(v, "v")
    return float(grid.h**2 * np.sum(np.multiply(u, v)))


def norm_l2(grid: Grid2D, u: Field2D) -> float:
    return float(np.sqrt(inner(grid, u, u)))


def norm_max(u: Field2D) -> float:
    return float(np.max(np.abs(u)))


def helmholtz_apply(grid: Grid2D, c: float, u: Field2D, kappa: float = 1.0) -> Field2D:
    """(c I - (kappa/2) Delta_h) u."""
    return c * u - 0.5 * kappa * laplacian(grid, u)


class HelmholtzSolver:
    """Solver for (c I - (kappa/2) Delta_h) u = rhs on a periodic grid.

    The FFT path divides by the exact discrete symbol; the CG path is an
    iterative fallback with relative tolerance cg_rtol.
    """

    def __init__(
        self,
        grid: Grid2D,
        kappa: float = 1.0,
        method: HelmholtzMethod = "fft",
        cg_rtol: float = 1e-12,
    ):
        if kappa < 0:
            raise ConfigurationError(f"kappa must be non-negative, got {kappa}")
        if method not in ("fft", "cg"):
            raise ConfigurationError(f"Unknown Helmholtz method: {method}")
        self.grid = grid
        self.kappa = kappa
        self.method = method
        self.cg_rtol = cg_rtol

    def solve(self, c: float, rhs: Field2D) -> Field2D:
        if not c > 0:
            raise IndefiniteOperatorError(f"Operator is indefinite for c = {c}; c must be positive")
        self.grid.check(rhs, "rhs")
        if self.method == "fft":
            return self._solve_fft(c, rhs)
        return self._solve_cg(c, rhs)

    def _solve_fft(self, c: float, rhs: Field2D) -> Field2D:
        denom = c + 0.5 * self.kappa * self.grid.laplacian_symbol
        spectrum = fft.rfft2(rhs)
        return fft.irfft2(spectrum / denom, s=self.grid.shape)

    def _solve_cg(self, c: float, rhs: Field2D) -> Field2D:
        M = self.grid.M
        n = M * M

        def matvec(x):
            return helmholtz_apply(self.grid, c, x.reshape(M, M), self.kappa).ravel()

        op = LinearOperator((n, n), matvec=matvec, dtype=float)
        x0 = rhs.ravel() / c
        solution, info = cg(op, rhs.ravel(), x0=x0, rtol=self.cg_rtol, atol=0.0, maxiter=10 * n)
        if info != 0:
            raise SolverError(f"CG did not converge (info={info})")
        return solution.reshape(M, M)

    def residual(self, c: float, u: Field2D, rhs: Field2D) -> float:
        """Relative residual in the discrete L2 norm, 0 for a zero rhs solved exactly."""
        r = helmholtz_apply(self.grid, c, u, self.kappa) - rhs
        scale = norm_l2(self.grid, rhs)
        err = norm_l2(self.grid, r)
        if scale == 0.0:
            return err
        return err / scale


def helmholtz_solve(
    grid: Grid2D,
    c: float,
    rhs: Field2D,
    kappa: float = 1.0,
    method: HelmholtzMethod = "fft",
) -> Field2D:
    """Solve (c I - (kappa/2) Delta_h) u = rhs; kappa = 1 is the scheme's (cI - Delta_h/2).

    Raises:
        IndefiniteOperatorError: c <= 0
        GridError: rhs shape does not match the grid
    """
    return HelmholtzSolver(grid, kappa=kappa, method=method).solve(c, rhs)
