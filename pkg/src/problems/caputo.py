"""Closed-form Caputo derivatives of power functions."""

import math
from typing import Union

import numpy as np
from scipy.special import gamma as gamma_fn, rgamma

from src.core.errors import ConfigurationError, SingularEvaluationError

ArrayLike = Union[float, np.ndarray]


def caputo_power(nu: float, mu: float, t: ArrayLike) -> ArrayLike:
    """Caputo derivative of order nu of t^mu.

    Returns Gamma(mu+1)/Gamma(mu+1-nu) t^(mu-nu). Polynomial powers of degree
    below ceil(nu) are annihilated and give 0.

    Raises:
        ConfigurationError: nu <= 0, or mu outside the range where the derivative is classical
        SingularEvaluationError: t = 0 with mu < nu
    """
    if not nu > 0:
        raise ConfigurationError(f"Order nu must be positive, got {nu}")
    m = math.ceil(nu)
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ConfigurationError("Caputo derivative is evaluated for t >= 0 only")

    if float(mu).is_integer() and 0 <= mu <= m - 1:
        out = np.zeros_like(t_arr)
        return float(out) if out.ndim == 0 else out
    if not mu > m - 1:
        raise ConfigurationError(f"t^{mu} has no classical Caputo derivative of order {nu}")
    if mu < nu and np.any(t_arr == 0):
        raise SingularEvaluationError(f"Caputo derivative of t^{mu} of order {nu} blows up at t = 0")

    out = gamma_fn(mu + 1.0) * rgamma(mu + 1.0 - nu) * t_arr ** (mu - nu)
    return float(out) if out.ndim == 0 else out
