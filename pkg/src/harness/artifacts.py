"""CSV and JSON writers for result artifacts.

Floats are written with their shortest round-tripping repr and missing values as
blanks, so identical inputs give byte-identical files.
"""

import csv
import io
import json
import logging
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from src.utils import PathLike, atomic_write_text, format_float

logger = logging.getLogger(__name__)

CONVERGENCE_COLUMNS = (
    "scheme",
    "beta",
    "sigma",
    "gamma",
    "N",
    "M",
    "norm",
    "error",
    "order",
    "expected_order",
    "wall_ms",
    "status",
)
STEP_COLUMNS = ("n", "t_n", "tau_n", "picard_iters", "residual", "wall_ms")
DCC_COLUMNS = ("n", "lag", "p_value")


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(float(value))
    return str(value)


def render_csv(rows: Iterable[Mapping[str, Any]], columns: Sequence[str]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(column)) for column in columns])
    return buffer.getvalue()


def write_csv(path: PathLike, rows: Iterable[Mapping[str, Any]], columns: Sequence[str]) -> Path:
    """Write rows atomically; keys missing from a row give blank cells."""
    rows = list(rows)
    out = atomic_write_text(path, render_csv(rows, columns))
    logger.info("Wrote %d rows to %s", len(rows), out)
    return out


def _jsonable(value: Any) -> Any:
    if isinstance(value, Mapping):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        # JSON has no NaN/inf
        return value if np.isfinite(value) else None
    if isinstance(value, Path):
        return str(value)
    return value


def render_json(payload: Any) -> str:
    return json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n"


def write_json(path: PathLike, payload: Any) -> Path:
    out = atomic_write_text(path, render_json(payload))
    logger.info("Wrote %s", out)
    return out
