"""Published error/order tables used as acceptance references.

Each column lists e(N) for N = 40, 80, 160, 320 on graded meshes with M = 1000,
followed by the consecutive-pair orders.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

REFERENCE_N = (40, 80, 160, 320)
REFERENCE_M = 1000


@dataclass(frozen=True)
class ReferenceColumn:
    table: str
    beta: float
    gamma: float
    sigma: float
    errors: Tuple[float, ...]
    orders: Tuple[float, ...]
    expected_order: float
    N: Tuple[int, ...] = REFERENCE_N

    def error_at(self, N: int) -> Optional[float]:
        if N not in self.N:
            return None
        return self.errors[self.N.index(N)]

    def order_at(self, N: int) -> Optional[float]:
        """Order reported on the row of N, i.e. log2(e(N/2) / e(N))."""
        if N not in self.N or self.N.index(N) == 0:
            return None
        return self.orders[self.N.index(N) - 1]


# table name -> beta -> gamma -> (errors, orders, expected order)
_RAW: Dict[str, Dict[float, Dict[float, tuple]]] = {
    "sigma_beta_minus_1": {
        1.1: {
            1: ((2.79e-1, 2.66e-1, 2.51e-1, 2.35e-1), (0.07, 0.09, 0.09), 0.1),
            2: ((2.01e-1, 1.75e-1, 1.52e-1, 1.33e-1), (0.20, 0.20, 0.20), 0.2),
            3: ((1.39e-1, 1.13e-1, 9.18e-2, 7.45e-2), (0.30, 0.30, 0.30), 0.3),
        },
        1.5: {
            1: ((5.56e-2, 4.28e-2, 3.19e-2, 2.34e-2), (0.38, 0.42, 0.45), 0.5),
            2: ((9.19e-3, 4.93e-3, 2.57e-3, 1.33e-3), (0.90, 0.94, 0.96), 1.0),
            3: ((9.19e-5, 2.69e-5, 8.60e-6, 2.81e-6), (1.72, 1.70, 1.61), 1.5),
        },
        1.9: {
            1: ((8.45e-4, 9.82e-4, 7.99e-4, 5.70e-4), (-0.22, 0.30, 0.49), 0.9),
            2: ((2.94e-3, 1.43e-3, 6.86e-4, 3.25e-4), (1.04, 1.06, 1.08), 1.1),
            3: ((3.64e-3, 1.66e-3, 7.67e-4, 3.55e-4), (1.13, 1.12, 1.11), 1.1),
        },
    },
    "sigma_half_beta": {
        1.1: {
            1: ((5.75e-2, 4.02e-2, 2.78e-2, 1.91e-2), (0.52, 0.53, 0.54), 0.55),
            2: ((7.71e-3, 3.64e-3, 1.71e-3, 8.02e-4), (1.08, 1.09, 1.09), 1.1),
            3: ((7.10e-4, 2.43e-4, 8.30e-5, 2.89e-5), (1.55, 1.55, 1.52), 1.65),
        },
        1.5: {
            1: ((2.54e-2, 1.63e-2, 1.02e-2, 6.24e-3), (0.64, 0.68, 0.71), 0.75),
            2: ((9.88e-4, 3.71e-4, 1.37e-4, 5.01e-5), (1.41, 1.44, 1.45), 1.5),
            3: ((1.18e-3, 4.06e-4, 1.39e-4, 4.75e-5), (1.54, 1.54, 1.55), 1.5),
        },
        1.9: {
            1: ((2.86e-3, 1.95e-3, 1.23e-3, 7.46e-4), (0.55, 0.66, 0.72), 0.95),
            2: ((1.45e-3, 6.93e-4, 3.31e-4, 1.57e-4), (1.06, 1.07, 1.08), 1.1),
            3: ((1.98e-3, 8.67e-4, 3.89e-4, 1.77e-4), (1.19, 1.16, 1.13), 1.1),
        },
    },
    "klein_gordon": {
        1.1: {
            2: ((1.46e-1, 1.29e-1, 1.14e-1, 1.00e-1), (0.17, 0.18, 0.19), 0.2),
            3: ((1.00e-1, 8.35e-2, 6.89e-2, 5.65e-2), (0.26, 0.28, 0.29), 0.3),
            5: ((4.58e-2, 3.35e-2, 2.43e-2, 1.76e-2), (0.45, 0.46, 0.46), 0.5),
        },
        1.5: {
            2: ((6.64e-3, 3.66e-3, 1.95e-3, 1.01e-3), (0.86, 0.91, 0.94), 1.0),
            3: ((1.01e-2, 4.88e-3, 2.40e-3, 1.19e-3), (1.05, 1.02, 1.01), 1.5),
            5: ((1.89e-2, 8.82e-3, 4.20e-3, 2.04e-3), (1.10, 1.07, 1.05), 1.5),
        },
        1.9: {
            2: ((6.66e-3, 3.17e-3, 1.53e-3, 7.41e-4), (1.07, 1.05, 1.04), 1.1),
            3: ((9.37e-3, 4.28e-3, 2.02e-3, 9.65e-4), (1.13, 1.09, 1.06), 1.1),
            5: ((1.56e-2, 6.85e-3, 3.15e-3, 1.49e-3), (1.19, 1.12, 1.08), 1.1),
        },
    },
}

TABLE_NAMES = tuple(_RAW)


def _sigma_for(table: str, beta: float) -> float:
    if table == "sigma_half_beta":
        return beta / 2.0
    return beta - 1.0


def reference_column(table: str, beta: float, gamma: float) -> ReferenceColumn:
    """Look up one (beta, gamma) column.

    Raises:
        KeyError: no such table or column
    """
    if table not in _RAW:
        raise KeyError(f"Unknown reference table {table!r}; choose from {TABLE_NAMES}")
    by_beta = _RAW[table]
    key_beta = next((b for b in by_beta if abs(b - beta) < 1e-9), None)
    if key_beta is None or not any(abs(g - gamma) < 1e-9 for g in by_beta[key_beta]):
        raise KeyError(f"No reference column for beta={beta}, gamma={gamma} in {table}")
    key_gamma = next(g for g in by_beta[key_beta] if abs(g - gamma) < 1e-9)
    errors, orders, expected = by_beta[key_beta][key_gamma]
    return ReferenceColumn(
        table=table,
        beta=key_beta,
        gamma=float(key_gamma),
        sigma=_sigma_for(table, key_beta),
        errors=errors,
        orders=orders,
        expected_order=expected,
    )


def find_reference(
    problem: str, beta: float, sigma: Optional[float], gamma: float
) -> Optional[ReferenceColumn]:
    """Reference column matching a run configuration, if the tables cover it."""
    if problem == "example52":
        table = "klein_gordon"
    elif problem == "example51" and sigma is not None and abs(sigma - (beta - 1.0)) < 1e-9:
        table = "sigma_beta_minus_1"
    elif problem == "example51" and sigma is not None and abs(sigma - beta / 2.0) < 1e-9:
        table = "sigma_half_beta"
    else:
        return None
    try:
        return reference_column(table, beta, gamma)
    except KeyError:
        return None


def all_columns() -> List[ReferenceColumn]:
    return [
        reference_column(table, beta, gamma)
        for table, by_beta in _RAW.items()
        for beta, by_gamma in by_beta.items()
        for gamma in by_gamma
    ]
