"""Nonuniform time meshes with the half-index quantities used by the L1 scheme."""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Union

import numpy as np

from .errors import MeshConditionError

logger = logging.getLogger(__name__)

# relative slack for the step condition, so that uniform meshes whose steps
# differ only in the last bits are accepted
STEP_CONDITION_RTOL = 64 * np.finfo(float).eps
MIN_FIRST_STEP = 1e3 * np.finfo(float).eps


@dataclass(frozen=True)
class TimeMesh:
    """Time levels t_0 = 0 < t_1 < ... < t_N = T and derived quantities.

    Attributes:
        t: levels t_0..t_N
        tau: steps tau_n = t_n - t_{n-1}, stored at tau[n - 1]
        tau_half: tau_{n-1/2}, stored at tau_half[n - 1]
        t_half: t_{n-1/2} = t_{n-1} + tau_n / 2, stored at t_half[n - 1]
        s: extended half grid s_0 = t_{-1/2} = t_0, s_n = t_{n-1/2}
    """

    t: np.ndarray
    tau: np.ndarray = field(repr=False)
    tau_half: np.ndarray = field(repr=False)
    t_half: np.ndarray = field(repr=False)
    s: np.ndarray = field(repr=False)
    satisfies_step_condition: bool = True

    @property
    def N(self) -> int:
        return len(self.tau)

    @property
    def T(self) -> float:
        return float(self.t[-1])

    def violations(self) -> list[int]:
        """Step indices n >= 2 with tau_n < tau_{n-1} beyond round-off."""
        return _step_violations(self.tau)

    def to_json(self) -> str:
        return json.dumps([float(x) for x in self.t])

    def __len__(self) -> int:
        return self.N


def _step_violations(tau: np.ndarray) -> list[int]:
    if len(tau) < 2:
        return []
    shrink = tau[:-1] - tau[1:]
    bad = np.nonzero(shrink > STEP_CONDITION_RTOL * tau[:-1])[0]
    # tau[i + 1] is tau_{i + 2}
    return [int(i) + 2 for i in bad]


def _build(levels: np.ndarray, enforce_step_condition: bool) -> TimeMesh:
    if levels.ndim != 1 or len(levels) < 2:
        raise MeshConditionError("A mesh needs at least two time levels")
    if not np.all(np.isfinite(levels)):
        raise MeshConditionError("Time levels must be finite")
    if levels[0] != 0.0:
        raise MeshConditionError(f"Mesh must start at t_0 = 0, got {levels[0]}", 0)

    tau = np.diff(levels)
    nonpositive = np.nonzero(tau <= 0.0)[0]
    if len(nonpositive):
        n = int(nonpositive[0]) + 1
        raise MeshConditionError(
            f"Time levels must be strictly increasing (tau_{n} = {tau[n - 1]})", n
        )

    T = float(levels[-1])
    if tau[0] < MIN_FIRST_STEP * T:
        raise MeshConditionError(
            f"First step {tau[0]:.3e} is below the minimum {MIN_FIRST_STEP * T:.3e}",
            1,
        )

    bad = _step_violations(tau)
    if bad and enforce_step_condition:
        n = bad[0]
        raise MeshConditionError(
            f"Step condition violated at n={n}: tau_{n} = {tau[n - 1]} "
            f"< tau_{n - 1} = {tau[n - 2]}",
            n,
        )
    if bad:
        logger.warning("Mesh violates the step condition at %d indices", len(bad))

    t_half = levels[:-1] + 0.5 * tau
    s = np.concatenate(([levels[0]], t_half))
    tau_half = np.empty_like(tau)
    tau_half[0] = 0.5 * tau[0]
    tau_half[1:] = 0.5 * (tau[1:] + tau[:-1])

    for arr in (levels, tau, tau_half, t_half, s):
        arr.setflags(write=False)

    return TimeMesh(
        t=levels,
        tau=tau,
        tau_half=tau_half,
        t_half=t_half,
        s=s,
        satisfies_step_condition=not bad,
    )


def graded_mesh(N: int, T: float = 1.0, gamma: float = 1.0) -> TimeMesh:
    """Graded mesh t_k = T (k/N)^gamma.

    Args:
        N: number of steps, at least 1
        T: final time
        gamma: grading exponent, at least 1

    Returns:
        TimeMesh with t_N snapped to T

    Raises:
        MeshConditionError: for N < 1, T <= 0 or gamma < 1
    """
    if int(N) != N or N < 1:
        raise MeshConditionError(f"N must be a positive integer, got {N}")
    if not T > 0:
        raise MeshConditionError(f"T must be positive, got {T}")
    if not gamma >= 1:
        raise MeshConditionError(
            f"gamma must be >= 1 to keep steps non-decreasing, got {gamma}"
        )

    N = int(N)
    k = np.arange(N + 1, dtype=float)
    if gamma == 1:
        levels = T * (k / N)
    else:
        levels = T * (k / N) ** gamma
    levels[-1] = T
    return _build(levels, enforce_step_condition=True)


def uniform_mesh(N: int, T: float = 1.0) -> TimeMesh:
    return graded_mesh(N, T, 1.0)


def validate_mesh(
    levels: Iterable[float], enforce_step_condition: bool = True
) -> TimeMesh:
    """Build a mesh from user-supplied levels.

    Args:
        levels: time levels starting at 0
        enforce_step_condition: reject meshes whose steps shrink; when False the
            mesh is built and flagged instead

    Raises:
        MeshConditionError: carrying the offending index
    """
    arr = np.array(list(levels), dtype=float)
    return _build(arr, enforce_step_condition=enforce_step_condition)


def load_mesh(path: Union[str, Path], enforce_step_condition: bool = True) -> TimeMesh:
    """Read levels from a JSON array or a one-float-per-line text file."""
    text = Path(path).read_text(encoding="utf-8").strip()
    if text.startswith("["):
        values = json.loads(text)
    else:
        values = [float(line) for line in text.splitlines() if line.strip()]
    logger.info("Loaded %d time levels from %s", len(values), path)
    return validate_mesh(values, enforce_step_condition=enforce_step_condition)


def random_admissible_mesh(
    rng: np.random.Generator, N: int, T: float = 1.0
) -> TimeMesh:
    """Random mesh with non-decreasing steps, used by the fuzz suites."""
    steps = np.sort(rng.uniform(0.05, 1.0, size=N))
    levels = np.concatenate(([0.0], np.cumsum(steps)))
    levels *= T / levels[-1]
    levels[-1] = T
    return validate_mesh(levels)
