"""Fractional weight functions and the reduced order type."""

from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.special import gamma as gamma_fn

from src.core.errors import ConfigurationError, SingularEvaluationError

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class FracOrder:
    """Reduced order alpha = beta - 1, strictly inside (0, 1)."""

    alpha: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ConfigurationError(f"alpha must lie strictly in (0, 1), got {self.alpha}")

    @classmethod
    def from_beta(cls, beta: float) -> "FracOrder":
        if not 1.0 < beta < 2.0:
            raise ConfigurationError(f"beta must lie strictly in (1, 2), got {beta}")
        return cls(beta - 1.0)

    @property
    def beta(self) -> float:
        return self.alpha + 1.0

    def __float__(self) -> float:
        return self.alpha


def as_alpha(alpha: Union[float, FracOrder]) -> float:
    if isinstance(alpha, FracOrder):
        return alpha.alpha
    return FracOrder(float(alpha)).alpha


def omega(gamma: float, t: ArrayLike) -> ArrayLike:
    """omega_gamma(t) = t^(gamma - 1) / Gamma(gamma).

    Raises:
        SingularEvaluationError: t == 0 with gamma <= 1, or t < 0
    """
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0):
        raise SingularEvaluationError("omega is only defined for t >= 0")
    if gamma <= 1.0 and np.any(arr == 0):
        if gamma == 1.0:
            raise SingularEvaluationError("omega_1(0) is excluded from the domain")
        raise SingularEvaluationError(f"omega_{gamma} is singular at t = 0")
    if gamma == 1.0:
        out = np.ones_like(arr)
    else:
        out = arr ** (gamma - 1.0) / gamma_fn(gamma)
    return float(out) if out.ndim == 0 else out


def power_gap(x: ArrayLike, d: ArrayLike, p: float) -> np.ndarray:
    """x^p - (x - d)^p for 0 < d <= x, without cancellation for small d / x.

    The expm1/log1p form keeps full relative accuracy however close the two
    powers are; d == x gives x^p exactly.
    """
    x = np.asarray(x, dtype=float)
    d = np.asarray(d, dtype=float)
    with np.errstate(divide="ignore"):
        return -(x**p) * np.expm1(p * np.log1p(-d / x))
