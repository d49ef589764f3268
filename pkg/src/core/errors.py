"""Exception hierarchy shared by every FracWave module."""

from typing import Optional


class FracWaveError(Exception):
    """Base class for all library errors."""


class ConfigurationError(FracWaveError, ValueError):
    """Invalid or conflicting run configuration."""


class MeshConditionError(FracWaveError, ValueError):
    """Time levels violate the non-decreasing step condition or a basic mesh rule."""

    def __init__(self, message: str, index: Optional[int] = None):
        super().__init__(message)
        self.index = index


class SingularEvaluationError(FracWaveError, ValueError):
    """A weight function was evaluated at a singular point."""


class KernelError(FracWaveError, ValueError):
    """Kernel rows are inconsistent, missing or contradict a structural property."""


class GridError(FracWaveError, ValueError):
    """Grid or field dimensions do not agree, or a field file is malformed."""


class IndefiniteOperatorError(GridError):
    """The implicit-step operator (c I - kappa/2 Delta_h) is not positive definite."""


class SolverError(FracWaveError, RuntimeError):
    """A per-step solve finished with a residual above tolerance."""

    def __init__(
        self,
        message: str,
        residual: Optional[float] = None,
        step: Optional[int] = None,
    ):
        super().__init__(message)
        self.residual = residual
        self.step = step


class PicardDivergenceError(SolverError):
    """Fixed-point iteration for the cubic term did not converge."""

    def __init__(
        self,
        message: str,
        residual: Optional[float] = None,
        step: Optional[int] = None,
        iterations: int = 0,
    ):
        super().__init__(message, residual=residual, step=step)
        self.iterations = iterations
