"""Kernel inspection for a single mesh and the seeded property fuzz suite."""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from joblib import Parallel, delayed

from src.core.timemesh import TimeMesh, random_admissible_mesh
from src.kernels import (
    DccSummary,
    L1KernelTable,
    LemmaReport,
    PROPERTY_NAMES,
    check_kernel_lemma,
    dcc_rows,
    omega_consistency_gap,
    summarize,
)
from src.kernels.dcc import CLAMP_TOL
from src.kernels.lemma import LEMMA_TOL

logger = logging.getLogger(__name__)

IDENTITY_TOL = 1e-11
PSD_TOL = 1e-10
SUM_BOUND_TOL = 1e-12


def kernel_columns() -> List[str]:
    columns = ["n", "lag", "a_value"]
    for name in PROPERTY_NAMES:
        columns += [f"{name}_passed", f"{name}_margin"]
    return columns


@dataclass
class KernelInspection:
    mesh: TimeMesh
    alpha: float
    table: L1KernelTable
    lemma: LemmaReport
    dcc: Optional[DccSummary] = None
    omega_gap_min: Optional[float] = None

    @property
    def passed(self) -> bool:
        ok = self.lemma.passed
        if self.dcc is not None:
            ok = ok and dcc_passed(self.dcc)
        return ok

    def kernel_rows(self) -> List[dict]:
        """One row per entry a^{(n)}_lag with the margins attached to it."""
        A = self.table.matrix()
        tol = self.lemma.tol
        rows = []
        for n in range(1, self.mesh.N + 1):
            for lag in range(n):
                row = {"n": n, "lag": lag, "a_value": A[n - 1, lag]}
                for name in PROPERTY_NAMES:
                    margin = self.lemma.margins[name][n - 1, lag]
                    if np.isnan(margin):
                        row[f"{name}_passed"] = None
                        row[f"{name}_margin"] = None
                    else:
                        row[f"{name}_passed"] = bool(margin >= -tol)
                        row[f"{name}_margin"] = float(margin) if np.isfinite(margin) else None
                rows.append(row)
        return rows

    def dcc_value_rows(self) -> List[dict]:
        out = []
        for row in dcc_rows(self.table.rows()):
            out.extend({"n": row.n, "lag": j, "p_value": row.p[j]} for j in range(row.n))
        return out

    def to_dict(self) -> dict:
        out = {
            "N": self.mesh.N,
            "T": self.mesh.T,
            "alpha": self.alpha,
            "satisfies_step_condition": self.mesh.satisfies_step_condition,
            "lemma": self.lemma.to_dict(),
            "passed": self.passed,
        }
        if self.omega_gap_min is not None:
            out["omega_consistency_min"] = self.omega_gap_min
        return out


def dcc_passed(summary: DccSummary) -> bool:
    return (
        summary.identity_residual < IDENTITY_TOL
        and summary.min_entry >= 0.0
        and summary.sum_bound_margin >= -SUM_BOUND_TOL
        and summary.psd_margin_p >= -PSD_TOL
        and summary.psd_margin_zeta >= -PSD_TOL
    )


class KernelInspector:
    """Lemma and DCC checks for one mesh, plus the randomized property suite."""

    def __init__(
        self,
        lemma_tol: float = LEMMA_TOL,
        clamp_tol: float = CLAMP_TOL,
        seed: int = 0x5EED,
        threads: int = 1,
    ):
        self.lemma_tol = lemma_tol
        self.clamp_tol = clamp_tol
        self.seed = seed
        self.threads = max(1, int(threads))

    def inspect(self, mesh: TimeMesh, alpha: float, dcc: bool = False) -> KernelInspection:
        table = L1KernelTable(mesh, alpha, cache=True)
        lemma = check_kernel_lemma(mesh, alpha, tol=self.lemma_tol, table=table)
        summary = summarize(table, self.clamp_tol) if dcc else None
        gap = float(np.min(omega_consistency_gap(mesh, alpha))) if dcc else None
        inspection = KernelInspection(
            mesh=mesh, alpha=alpha, table=table, lemma=lemma, dcc=summary, omega_gap_min=gap
        )
        logger.info(
            "Kernel check N=%d alpha=%.3f: %s", mesh.N, alpha, "passed" if inspection.passed else "FAILED"
        )
        return inspection

    def fuzz(self, cases: int = 100, N_max: int = 60, alpha_range=(0.05, 0.95)) -> "FuzzReport":
        """Check every property on seeded random admissible meshes."""
        rng = np.random.default_rng(self.seed)
        configs = [
            (int(rng.integers(2, N_max + 1)), float(rng.uniform(*alpha_range)), int(rng.integers(2**32)))
            for _ in range(cases)
        ]
        results = Parallel(n_jobs=self.threads)(
            delayed(_fuzz_case)(N, alpha, case_seed, self.lemma_tol, self.clamp_tol)
            for N, alpha, case_seed in configs
        )
        report = FuzzReport(seed=self.seed, cases=list(results))
        logger.info("Kernel fuzz suite: %d/%d cases passed", report.passed_count, cases)
        return report


def _fuzz_case(N: int, alpha: float, seed: int, lemma_tol: float, clamp_tol: float) -> dict:
    mesh = random_admissible_mesh(np.random.default_rng(seed), N)
    inspector = KernelInspector(lemma_tol=lemma_tol, clamp_tol=clamp_tol)
    inspection = inspector.inspect(mesh, alpha, dcc=True)
    summary = inspection.dcc.to_dict()
    return {
        "N": N,
        "alpha": alpha,
        "seed": seed,
        "lemma_passed": inspection.lemma.passed,
        "worst_margins": {
            name: check.worst_margin for name, check in inspection.lemma.properties.items()
        },
        "dcc": summary,
        "omega_consistency_min": inspection.omega_gap_min,
        "passed": inspection.passed,
    }


@dataclass
class FuzzReport:
    seed: int
    cases: List[dict] = field(default_factory=list)

    @property
    def passed_count(self) -> int:
        return sum(1 for case in self.cases if case["passed"])

    @property
    def passed(self) -> bool:
        return self.passed_count == len(self.cases)

    def failures(self) -> List[dict]:
        return [case for case in self.cases if not case["passed"]]

    def to_dict(self) -> dict:
        return {"seed": self.seed, "cases": self.cases, "passed": self.passed}
