"""Manufactured test problems with exact solutions.

Problems solve CD^beta u = kappa Delta u - g(u) + f on (0, L)^2, periodic, with
u(., 0) = phi1 and u_t(., 0) = phi2. kappa is 1 for the diffusion-wave problems
and eps^2 for the Klein-Gordon problem, where g(u) = u^3.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np
from scipy.special import gamma as gamma_fn

from src.core.errors import ConfigurationError
from src.core.spacegrid import Field2D, Grid2D
from .caputo import caputo_power

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi

SpaceTimeFn = Callable[[np.ndarray, np.ndarray, float], np.ndarray]
SpaceFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


class Nonlinearity(Enum):
    NONE = "none"
    CUBIC = "cubic"


def _zero(X, Y):
    return np.zeros_like(X)


@dataclass
class ProblemSpec:
    """A fractional diffusion-wave problem.

    Attributes:
        name: registry name
        beta: equation order in (1, 2)
        sigma: regularity parameter, None for problems outside the power-law family
        f: forcing f(X, Y, t)
        phi1, phi2: initial value and initial velocity
        exact_u: exact solution u(X, Y, t) when known
        nonlinearity: NONE or CUBIC
        eps: diffusion scale; Delta is multiplied by eps^2
    """

    name: str
    beta: float
    f: SpaceTimeFn
    sigma: Optional[float] = None
    L: float = TWO_PI
    T: float = 1.0
    phi1: SpaceFn = _zero
    phi2: SpaceFn = _zero
    exact_u: Optional[SpaceTimeFn] = None
    exact_ut: Optional[SpaceTimeFn] = None
    exact_caputo: Optional[SpaceTimeFn] = None
    exact_laplacian: Optional[SpaceTimeFn] = None
    nonlinearity: Nonlinearity = Nonlinearity.NONE
    eps: float = 1.0
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 1.0 < self.beta < 2.0:
            raise ConfigurationError(f"beta must lie strictly in (1, 2), got {self.beta}")
        if self.sigma is not None and not (0.0 < self.sigma < 1.0 or 1.0 < self.sigma < 2.0):
            raise ConfigurationError(f"sigma must lie in (0, 1) or (1, 2), got {self.sigma}")
        if not self.eps > 0:
            raise ConfigurationError(f"eps must be positive, got {self.eps}")
        if not self.T > 0 or not self.L > 0:
            raise ConfigurationError("T and L must be positive")

    @property
    def alpha(self) -> float:
        return self.beta - 1.0

    @property
    def kappa(self) -> float:
        """Coefficient of Delta in the equation."""
        return self.eps**2

    @property
    def is_linear(self) -> bool:
        return self.nonlinearity is Nonlinearity.NONE

    def forcing(self, grid: Grid2D, t: float, n: Optional[int] = None) -> Field2D:
        """Forcing sampled on the grid at time t; n is the step it is requested for."""
        return grid.sample(self.f, t)

    def initial_value(self, grid: Grid2D) -> Field2D:
        return grid.sample(self.phi1)

    def initial_velocity(self, grid: Grid2D) -> Field2D:
        return grid.sample(self.phi2)

    def exact(self, grid: Grid2D, t: float) -> Optional[Field2D]:
        if self.exact_u is None:
            return None
        return grid.sample(self.exact_u, t)

    def nonlinear_term(self, u: Field2D) -> Field2D:
        if self.nonlinearity is Nonlinearity.CUBIC:
            return u**3
        return np.zeros_like(u)

    def pde_residual(self, X, Y, t) -> np.ndarray:
        """CD^beta u - kappa Delta u + g(u) - f at sample points, from closed forms."""
        if self.exact_caputo is None or self.exact_laplacian is None or self.exact_u is None:
            raise ConfigurationError(f"Problem {self.name} has no closed-form derivatives")
        u = self.exact_u(X, Y, t)
        return (
            self.exact_caputo(X, Y, t)
            - self.kappa * self.exact_laplacian(X, Y, t)
            + self.nonlinear_term(u)
            - self.f(X, Y, t)
        )


def example_51(beta: float, sigma: float, T: float = 1.0) -> ProblemSpec:
    """u = t^(sigma+1) sin x sin y with
    f = (2 t^(sigma+1) + Gamma(sigma+2)/Gamma(sigma+2-beta) t^(sigma+1-beta)) sin x sin y.
    """
    mu = sigma + 1.0
    coef = gamma_fn(sigma + 2.0) / gamma_fn(sigma + 2.0 - beta)

    def f(X, Y, t):
        return (2.0 * t**mu + coef * t ** (mu - beta)) * np.sin(X) * np.sin(Y)

    return ProblemSpec(
        name="example51",
        beta=beta,
        sigma=sigma,
        T=T,
        f=f,
        exact_u=lambda X, Y, t: t**mu * np.sin(X) * np.sin(Y),
        exact_ut=lambda X, Y, t: mu * t**sigma * np.sin(X) * np.sin(Y),
        exact_caputo=lambda X, Y, t: caputo_power(beta, mu, t) * np.sin(X) * np.sin(Y),
        exact_laplacian=lambda X, Y, t: -2.0 * t**mu * np.sin(X) * np.sin(Y),
    )


def example_52(beta: float, eps: float = 1.0, T: float = 1.0) -> ProblemSpec:
    """Klein-Gordon problem CD^beta u - eps^2 Delta u + u^3 = f with u = t^beta sin x sin y.

    f = Gamma(beta+1) sin x sin y + 2 eps^2 t^beta sin x sin y + t^(3 beta) sin^3 x sin^3 y
    """
    g = gamma_fn(beta + 1.0)

    def f(X, Y, t):
        s = np.sin(X) * np.sin(Y)
        return g * s + 2.0 * eps**2 * t**beta * s + t ** (3.0 * beta) * s**3

    return ProblemSpec(
        name="example52",
        beta=beta,
        sigma=beta - 1.0,
        T=T,
        f=f,
        exact_u=lambda X, Y, t: t**beta * np.sin(X) * np.sin(Y),
        exact_ut=lambda X, Y, t: beta * t ** (beta - 1.0) * np.sin(X) * np.sin(Y),
        exact_caputo=lambda X, Y, t: caputo_power(beta, beta, t) * np.sin(X) * np.sin(Y),
        exact_laplacian=lambda X, Y, t: -2.0 * t**beta * np.sin(X) * np.sin(Y),
        nonlinearity=Nonlinearity.CUBIC,
        eps=eps,
    )


def linear_in_time(beta: float, T: float = 1.0) -> ProblemSpec:
    """Spatially constant u = 1 + t with f = 0, reproduced exactly by both schemes."""
    return ProblemSpec(
        name="linear",
        beta=beta,
        T=T,
        f=lambda X, Y, t: np.zeros_like(X),
        phi1=lambda X, Y: np.ones_like(X),
        phi2=lambda X, Y: np.ones_like(X),
        exact_u=lambda X, Y, t: (1.0 + t) * np.ones_like(X),
        exact_ut=lambda X, Y, t: np.ones_like(X),
        exact_caputo=lambda X, Y, t: np.zeros_like(X),
        exact_laplacian=lambda X, Y, t: np.zeros_like(X),
    )


def quadratic_in_time(beta: float, T: float = 1.0) -> ProblemSpec:
    """Spatially constant u = t^2/2 with f = t^(2-beta)/Gamma(3-beta)."""
    c = 1.0 / gamma_fn(3.0 - beta)
    return ProblemSpec(
        name="quadratic",
        beta=beta,
        T=T,
        f=lambda X, Y, t: c * t ** (2.0 - beta) * np.ones_like(X),
        exact_u=lambda X, Y, t: 0.5 * t**2 * np.ones_like(X),
        exact_ut=lambda X, Y, t: t * np.ones_like(X),
        exact_caputo=lambda X, Y, t: 0.5 * caputo_power(beta, 2.0, t) * np.ones_like(X),
        exact_laplacian=lambda X, Y, t: np.zeros_like(X),
    )
