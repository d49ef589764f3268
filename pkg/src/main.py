"""Command-line entry point for FracWave.

    python -m src.main run --problem example51 --beta 1.5 --gamma 2 --N 80 --M 64
    python -m src.main convergence --beta 1.5 --sigma 0.5 --gamma 2 --N 40,80,160,320 --M 512
    python -m src.main kernels-check --alpha 0.5 --gamma 3 --N 50 --dcc

Exit codes: 0 success, 1 numerical failure, 2 configuration error.
"""

import argparse
import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from pydantic import ValidationError

from src.config import (
    SUBCOMMANDS,
    ConfigFactory,
    Container,
    RunConfig,
    app_for_run,
    build_run_config,
)
from src.core import (
    ConfigurationError,
    GridError,
    Grid2D,
    KernelError,
    MeshConditionError,
    SingularEvaluationError,
    SolverError,
    TimeMesh,
    graded_mesh,
    load_mesh,
    write_field,
)
from src.harness import (
    CONVERGENCE_COLUMNS,
    DCC_COLUMNS,
    STEP_COLUMNS,
    ConvergenceHarness,
    KernelInspector,
    TruncationStudy,
    expected_order,
    find_reference,
    fit_decay,
    kernel_columns,
    write_csv,
    write_json,
)
from src.kernels import alpha_limit_probe
from src.problems import ProblemSpec, check_custom_grid, custom_problem, example_51, example_52
from src.schemes import EXPERIMENTAL_NOTE, Bdf2Stepper, L1Stepper
from src.utils import parse_int_list

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_CONFIG = 2

LIST_SUBCOMMANDS = ("convergence", "truncation", "bdf2-compare")

# (flag, RunConfig field, type, help text with units); nested fields use "solver.x"
_FLAGS = [
    ("--problem", "problem", str, "problem to solve: example51, example52 or custom"),
    ("--beta", "beta", float, "equation order beta in (1, 2)"),
    ("--sigma", "sigma", float, "regularity parameter of example51, in (0, 1) or (1, 2); default beta - 1"),
    ("--gamma", "gamma", float, "grading exponent of t_k = T (k/N)^gamma, >= 1"),
    ("--N", "N", str, "number of time steps; a comma separated doubling list for convergence, truncation and bdf2-compare"),
    ("--M", "M", int, "grid points per direction (even, >= 4)"),
    ("--L", "L", float, "side of the periodic square domain (length units)"),
    ("--T", "T", float, "final time (time units)"),
    ("--eps", "eps", float, "diffusion scale of example52; Delta is multiplied by eps^2"),
    ("--alpha", "alpha", float, "kernel order alpha in (0, 1) for kernels-check and truncation; default beta - 1"),
    ("--norm", "norm", str, "primary error norm: max or l2 (both are always reported)"),
    ("--output-dir", "output_dir", Path, "directory receiving all output files"),
    ("--seed", "seed", int, "seed of the randomized suites"),
    ("--threads", "threads", int, "worker processes for independent runs, capped by FRACWAVE_THREADS"),
    ("--mesh-file", "mesh_file", Path, "JSON array or one-per-line list of time levels t_0..t_N"),
    ("--forcing-dir", "forcing_dir", Path, "directory with f_00001.f2d... for the custom problem"),
    ("--snapshots", "snapshots", str, "comma separated steps n whose u^n is written as u_XXXXX.f2d"),
    ("--fuzz-cases", "fuzz_cases", int, "random admissible meshes checked by kernels-check"),
    ("--solver-rtol", "solver.solver_rtol", float, "relative residual accepted per Helmholtz solve"),
    ("--picard-tol", "solver.picard_tol", float, "relative Picard stopping tolerance"),
    ("--picard-max-iter", "solver.picard_max_iter", int, "Picard iterations allowed per step"),
    ("--helmholtz", "solver.helmholtz_method", str, "Helmholtz solver: fft or cg"),
    ("--cg-rtol", "solver.cg_rtol", float, "relative tolerance of the cg Helmholtz solver"),
    ("--clamp-tol", "kernel.clamp_tol", float, "round-off negative DCC entries above -clamp_tol are zeroed"),
    ("--lemma-tol", "kernel.lemma_tol", float, "kernel property checks pass for margins >= -lemma_tol"),
]

_SWITCHES = [
    ("--experimental-bdf2", "experimental_bdf2", "enable the experimental BDF2 variant"),
    ("--dcc", "dcc", "also check and write the DCC kernels"),
    ("--floor-probe", "floor_probe", "estimate the spatial error floor before acceptance checks"),
    ("--record-timing", "record_timing", "fill the wall-clock columns (output is then not reproducible)"),
    ("--lagged", "solver.lagged_nonlinearity", "freeze the cubic term at u^{n-1} instead of iterating"),
    ("--cache-rows", "kernel.cache_rows", "keep every L1 kernel row in memory"),
]


def _field_default(dotted: str) -> Any:
    model: Any = RunConfig
    parts = dotted.split(".")
    for part in parts[:-1]:
        model = model.model_fields[part].default_factory
    field = model.model_fields[parts[-1]]
    if field.default_factory is not None:
        return field.default_factory()
    return field.default


def _format_default(value: Any) -> str:
    if value is None:
        return "unset"
    if isinstance(value, float) and value == 2.0 * math.pi:
        return "2*pi"
    if isinstance(value, int) and not isinstance(value, bool) and value == 0x5EED:
        return "0x5EED"
    return str(value)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", type=Path, dest="config_file", help="JSON file of config values; flags override it")
    common.add_argument(
        "--environment",
        choices=["development", "production", "testing"],
        help="environment defaults (default: FRACWAVE_ENVIRONMENT or development)",
    )
    common.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="logging level (default: from the environment)",
    )
    for flag, dest, kind, text in _FLAGS:
        common.add_argument(
            flag,
            dest=dest,
            type=kind,
            help=f"{text} (default: {_format_default(_field_default(dest))})",
        )
    for flag, dest, text in _SWITCHES:
        common.add_argument(flag, dest=dest, action="store_true", help=f"{text} (default: off)")

    parser = argparse.ArgumentParser(
        prog="fracwave",
        description="Graded-mesh L1 solver for time-fractional diffusion-wave equations",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    descriptions = {
        "run": "march one problem and write final.f2d, steps.csv and summary.json",
        "convergence": "tabulate e(N) and orders, write convergence.csv and acceptance.json",
        "kernels-check": "check the L1 kernel properties, write kernels.csv and lemma.json",
        "truncation": "measure DCC-weighted truncation errors against their bounds",
        "bdf2-compare": "compare L1 and the experimental BDF2 variant on one configuration",
    }
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common], help=descriptions[name], description=descriptions[name])
    return parser


def _set(values: Dict[str, Any], dotted: str, value: Any) -> None:
    parts = dotted.split(".")
    for part in parts[:-1]:
        values = values.setdefault(part, {})
    values[parts[-1]] = value


def flags_to_values(subcommand: str, namespace: Dict[str, Any]) -> Dict[str, Any]:
    """Translate parsed flags into RunConfig keys.

    Raises:
        ConfigurationError: malformed list values, naming the flag's field
    """
    values: Dict[str, Any] = {"subcommand": subcommand}
    for key, value in namespace.items():
        if key in ("subcommand", "config_file", "environment", "log_level"):
            continue
        if key == "N":
            try:
                steps = parse_int_list(value)
            except ValueError as exc:
                raise ConfigurationError(f"N: {exc}") from exc
            if len(steps) > 1 and subcommand not in LIST_SUBCOMMANDS:
                raise ConfigurationError(f"N: {subcommand} takes a single step count, got {value}")
            values["N"] = steps[-1]
            if subcommand in LIST_SUBCOMMANDS:
                values["N_list"] = steps
            continue
        if key == "snapshots":
            try:
                values["snapshots"] = parse_int_list(value)
            except ValueError as exc:
                raise ConfigurationError(f"snapshots: {exc}") from exc
            continue
        _set(values, key, value)
    return values


def _problem(run: RunConfig) -> ProblemSpec:
    if run.problem == "custom":
        return custom_problem(run.forcing_dir, run.beta, run.L, run.T, run.eps)
    if abs(run.L - 2.0 * math.pi) > 1e-12:
        raise ConfigurationError(f"L: {run.problem} is posed on (0, 2*pi)^2, got L={run.L}")
    if run.problem == "example52":
        return example_52(run.beta, run.eps, run.T)
    return example_51(run.beta, run.sigma, run.T)


def _mesh(run: RunConfig, N: Optional[int] = None) -> TimeMesh:
    if run.mesh_file is not None:
        return load_mesh(run.mesh_file)
    return graded_mesh(N or run.N, run.T, run.gamma)


def _sigma(run: RunConfig) -> float:
    return run.sigma if run.sigma is not None else run.beta - 1.0


def handle_run(run: RunConfig, container: Container) -> int:
    problem = _problem(run)
    mesh = _mesh(run)
    grid = Grid2D(run.M, problem.L)
    if run.problem == "custom":
        check_custom_grid(problem, grid, mesh.N)

    if run.experimental_bdf2:
        report = container.get(Bdf2Stepper).run(problem, mesh, grid, snapshots=tuple(run.snapshots))
    else:
        report = container.get(L1Stepper).run(problem, mesh, grid, snapshots=tuple(run.snapshots))

    out = run.output_dir
    write_field(out / "final.f2d", report.u_final)
    for n, field in sorted(report.snapshots.items()):
        write_field(out / f"u_{n:05d}.f2d", field)
    write_csv(out / "steps.csv", [s.as_row(run.record_timing) for s in report.stats], STEP_COLUMNS)
    summary = report.summary(problem.exact(grid, mesh.T), run.record_timing)
    write_json(out / "summary.json", summary)
    logger.info("Run finished: e_max=%s e_l2=%s", summary["e_max"], summary["e_l2"])
    return EXIT_OK


def handle_convergence(run: RunConfig, container: Container) -> int:
    harness: ConvergenceHarness = container.get(ConvergenceHarness)
    problem = _problem(run)
    scheme = "bdf2" if run.experimental_bdf2 else "l1"
    table = harness.study(problem, run.gamma, run.N_list, run.M, run.norm, scheme)

    floor = 0.0
    if run.floor_probe and not table.failed:
        floor = harness.spatial_floor(problem, run.gamma, run.N_list[-1], run.M)

    acceptance: Dict[str, Any] = {"reference_table": None, "criteria": [], "passed": None}
    reference = find_reference(run.problem, run.beta, run.sigma, run.gamma)
    if reference is not None and not table.failed:
        acceptance = harness.acceptance(table, reference, spatial_floor=floor)
    acceptance.update(
        {
            "table": table.to_dict(),
            "expected_order": table.rows[0].expected_order,
            "monotone_decay": table.is_monotone(),
            "spatial_floor": floor,
        }
    )

    out = run.output_dir
    write_csv(out / "convergence.csv", table.csv_rows(run.record_timing), CONVERGENCE_COLUMNS)
    write_json(out / "acceptance.json", acceptance)
    if table.failed:
        logger.error("Convergence study had failed runs")
        return EXIT_NUMERICAL
    return EXIT_OK


def handle_kernels(run: RunConfig, container: Container) -> int:
    inspector: KernelInspector = container.get(KernelInspector)
    mesh = _mesh(run)
    alpha = run.effective_alpha
    inspection = inspector.inspect(mesh, alpha, dcc=run.dcc)

    out = run.output_dir
    write_csv(out / "kernels.csv", inspection.kernel_rows(), kernel_columns())
    write_json(out / "lemma.json", inspection.to_dict())
    if run.dcc:
        write_csv(out / "dcc.csv", inspection.dcc_value_rows(), DCC_COLUMNS)
        payload = inspection.dcc.to_dict()
        payload["row_sums"] = inspection.dcc.per_row_sum
        payload["omega_consistency_min"] = inspection.omega_gap_min
        payload["alpha_limit"] = alpha_limit_probe(inspection.table)
        write_json(out / "dcc.json", payload)
    if run.fuzz_cases:
        fuzz = KernelInspector(
            lemma_tol=inspector.lemma_tol,
            clamp_tol=inspector.clamp_tol,
            seed=run.seed,
            threads=inspector.threads,
        ).fuzz(cases=run.fuzz_cases)
        write_json(out / "fuzz.json", fuzz.to_dict())
    if not inspection.passed:
        logger.warning("Kernel checks failed; see %s", out / "lemma.json")
    return EXIT_OK


def handle_truncation(run: RunConfig, container: Container) -> int:
    study: TruncationStudy = container.get(TruncationStudy)
    alpha = run.effective_alpha
    sigma = _sigma(run)

    if run.mesh_file is not None:
        reports = [study.report(_mesh(run), alpha, sigma)]
    else:
        reports = [study.graded(alpha, sigma, run.gamma, N, run.T) for N in run.N_list]

    rows: List[dict] = []
    for report in reports:
        rows.extend({"N": report.N, **row} for row in report.rows())
    payload: Dict[str, Any] = {
        "alpha": alpha,
        "sigma": sigma,
        "gamma": run.gamma,
        "reports": [r.to_dict() for r in reports],
        "bound_holds": all(r.bound_holds for r in reports),
    }
    if len(reports) >= 2:
        fit = fit_decay(alpha, sigma, run.gamma, run.N_list, run.T, reports)
        payload["decay"] = fit.to_dict()

    out = run.output_dir
    columns = ["N", "n", "R", "weighted", "lemma_bound", "corollary_bound", "bound_holds"]
    write_csv(out / "truncation.csv", rows, columns)
    write_json(out / "truncation.json", payload)
    return EXIT_OK


def handle_bdf2_compare(run: RunConfig, container: Container) -> int:
    harness: ConvergenceHarness = container.get(ConvergenceHarness)
    problem = _problem(run)
    tables = harness.compare_schemes(problem, run.gamma, run.N_list, run.M, run.norm)

    rows = []
    for table in tables.values():
        rows.extend(table.csv_rows(run.record_timing))
    l1_last = tables["l1"].orders()[-1]
    bdf2_last = tables["bdf2"].orders()[-1]
    payload = {
        "note": EXPERIMENTAL_NOTE,
        "expected_order_l1": expected_order(run.beta, _sigma(run), run.gamma),
        "tables": {name: table.to_dict() for name, table in tables.items()},
        "last_order": {"l1": l1_last, "bdf2": bdf2_last},
        "bdf2_exceeds_l1": None if l1_last is None or bdf2_last is None else bdf2_last > l1_last,
    }

    out = run.output_dir
    write_csv(out / "bdf2_compare.csv", rows, CONVERGENCE_COLUMNS)
    write_json(out / "bdf2_compare.json", payload)
    if any(table.failed for table in tables.values()):
        return EXIT_NUMERICAL
    return EXIT_OK


HANDLERS: Dict[str, Callable[[RunConfig, Container], int]] = {
    "run": handle_run,
    "convergence": handle_convergence,
    "kernels-check": handle_kernels,
    "truncation": handle_truncation,
    "bdf2-compare": handle_bdf2_compare,
}


def _validation_message(exc: ValidationError) -> str:
    parts = []
    for error in exc.errors():
        loc = ".".join(str(item) for item in error["loc"]) or "config"
        parts.append(f"{loc}: {error['msg']}")
    return "; ".join(parts)


def parse_and_dispatch(argv: Optional[List[str]] = None) -> int:
    """Parse argv, validate the effective configuration and run one subcommand.

    Returns:
        0 on success, 1 on numerical failure, 2 on configuration error
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    namespace = vars(args)
    subcommand = namespace["subcommand"]

    try:
        app = ConfigFactory.create_config(namespace.get("environment"))
        level = namespace.get("log_level") or app.log_level
        logging.basicConfig(level=level, format="%(levelname)s - %(message)s")
        logging.getLogger().setLevel(level)

        flags = flags_to_values(subcommand, namespace)
        run = build_run_config(app, flags, namespace.get("config_file"))
        container = Container()
        container.set_config(app_for_run(app, run))

        write_json(run.output_dir / "config.json", json.loads(run.model_dump_json()))
        logger.info("Dispatching %s into %s", subcommand, run.output_dir)
        return HANDLERS[subcommand](run, container)
    except ValidationError as exc:
        logger.error("Invalid configuration: %s", _validation_message(exc))
        return EXIT_CONFIG
    except (ConfigurationError, MeshConditionError, GridError, SingularEvaluationError) as exc:
        logger.error("Configuration error: %s", exc)
        return EXIT_CONFIG
    except (SolverError, KernelError) as exc:
        logger.error("Numerical failure: %s", exc)
        return EXIT_NUMERICAL


def main() -> None:
    sys.exit(parse_and_dispatch())


if __name__ == "__main__":
    main()
