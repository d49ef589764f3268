"""User-supplied problems whose forcing is stored as sampled fields.

Directory layout:

    f_00001.f2d ... f_NNNNN.f2d   forcing of step n, sampled at t_{n-1/2}
    phi1.f2d, phi2.f2d            optional initial value and velocity (zero if absent)

Field files use the Field2D binary format (or CSV with a .csv suffix).
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional

import numpy as np

from src.core.errors import ConfigurationError, GridError
from src.core.fieldio import read_field
from src.core.spacegrid import Field2D, Grid2D
from .examples import ProblemSpec, TWO_PI

logger = logging.getLogger(__name__)


def forcing_filename(n: int, suffix: str = ".f2d") -> str:
    return f"f_{n:05d}{suffix}"


def _no_forcing(X, Y, t):
    raise ConfigurationError("Custom problems are forced through their field files")


@dataclass
class CustomProblem(ProblemSpec):
    """Problem forced by per-step fields read from a directory."""

    directory: Path = field(default_factory=Path)
    suffix: str = ".f2d"
    _cache: Dict[int, Field2D] = field(default_factory=dict, repr=False)

    def forcing(self, grid: Grid2D, t: float, n: Optional[int] = None) -> Field2D:
        if n is None:
            raise ConfigurationError("Custom forcing is indexed by step; n is required")
        if n not in self._cache:
            path = self.directory / forcing_filename(n, self.suffix)
            if not path.exists():
                raise ConfigurationError(f"Missing forcing file for step {n}: {path}")
            self._cache[n] = grid.check(read_field(path), str(path))
        return self._cache[n]

    def _optional(self, grid: Grid2D, name: str) -> Field2D:
        path = self.directory / f"{name}{self.suffix}"
        if not path.exists():
            return grid.zeros()
        return grid.check(read_field(path), str(path))

    def initial_value(self, grid: Grid2D) -> Field2D:
        return self._optional(grid, "phi1")

    def initial_velocity(self, grid: Grid2D) -> Field2D:
        return self._optional(grid, "phi2")

    def available_steps(self) -> int:
        n = 0
        while (self.directory / forcing_filename(n + 1, self.suffix)).exists():
            n += 1
        return n


def custom_problem(
    directory, beta: float, L: float = TWO_PI, T: float = 1.0, eps: float = 1.0
) -> CustomProblem:
    """Load a custom problem description.

    Raises:
        ConfigurationError: the directory does not exist or holds no forcing files
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise ConfigurationError(f"Forcing directory {directory} does not exist")
    suffix = ".csv" if (directory / forcing_filename(1, ".csv")).exists() else ".f2d"
    problem = CustomProblem(
        name="custom", beta=beta, f=_no_forcing, L=L, T=T, eps=eps, directory=directory, suffix=suffix
    )
    steps = problem.available_steps()
    if steps == 0:
        raise ConfigurationError(f"No forcing files ({forcing_filename(1, suffix)}, ...) in {directory}")
    logger.info("Custom problem: %d forcing fields in %s", steps, directory)
    return problem


def check_custom_grid(problem: CustomProblem, grid: Grid2D, N: int) -> None:
    if problem.available_steps() < N:
        raise ConfigurationError(
            f"Custom forcing covers {problem.available_steps()} steps, the run needs {N}"
        )
    first = problem.forcing(grid, 0.0, 1)
    if np.shape(first) != grid.shape:
        raise GridError(f"Forcing fields are {np.shape(first)}, grid is {grid.shape}")
