"""Adaptive-quadrature evaluation of the kernel integrals.

Used only to cross-check the closed forms; never on the stepping path.
"""

from scipy.integrate import quad
from scipy.special import gamma as gamma_fn

from src.core.timemesh import TimeMesh
from .weights import omega

QUAD_OPTS = dict(epsabs=0.0, epsrel=1e-13, limit=200)


def _weighted_integral(f, lo: float, hi: float, end: float, alpha: float) -> float:
    """Integral of f(s) * (end - s)^(-alpha) / Gamma(1 - alpha) over [lo, hi]."""
    scale = 1.0 / gamma_fn(1.0 - alpha)
    if hi >= end:
        # singular endpoint: use the algebraic weight (end - s)^(-alpha)
        value, _ = quad(f, lo, hi, weight="alg", wvar=(0.0, -alpha), **QUAD_OPTS)
        return scale * value
    value, _ = quad(lambda s: f(s) * omega(1.0 - alpha, end - s), lo, hi, **QUAD_OPTS)
    return value


def l1_entry_by_quadrature(mesh: TimeMesh, alpha: float, n: int, k: int) -> float:
    """a^{(n)}_{n-k} from its defining integral over [s_{k-1}, s_k]."""
    lo, hi = mesh.s[k - 1], mesh.s[k]
    value = _weighted_integral(lambda s: 1.0, lo, hi, mesh.s[n], alpha)
    return value / (hi - lo)


def bdf2_entries_by_quadrature(
    mesh: TimeMesh, alpha: float, n: int, k: int
) -> tuple[float, float]:
    """Integer-level pair (abar^{(n)}_{n-k}, varpi^{(n)}_{n-k}) from their integrals."""
    lo, hi = mesh.t[k - 1], mesh.t[k]
    tau = hi - lo
    abar = _weighted_integral(lambda s: 1.0, lo, hi, mesh.t[n], alpha) / tau
    varpi = (
        _weighted_integral(lambda s: (2.0 * s - hi - lo) / tau, lo, hi, mesh.t[n], alpha)
        / tau
    )
    return abar, varpi
