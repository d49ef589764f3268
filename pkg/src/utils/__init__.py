"""Utility functions shared by the CLI and the output writers."""

import os
import tempfile
from pathlib import Path
from typing import List, Union

PathLike = Union[str, Path]


def atomic_write_bytes(path: PathLike, data: bytes) -> Path:
    """Write data to path through a temporary file and a rename.

    Args:
        path: Destination file; parent directories are created

    Returns:
        The destination path
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def atomic_write_text(path: PathLike, text: str) -> Path:
    return atomic_write_bytes(path, text.encode("utf-8"))


def parse_int_list(text: str) -> List[int]:
    """Parse a comma separated list such as "40,80,160".

    Raises:
        ValueError: on empty items or non-integers
    """
    items = [item.strip() for item in str(text).split(",")]
    if not items or any(not item for item in items):
        raise ValueError(f"Expected a comma separated list of integers, got {text!r}")
    return [int(item) for item in items]


def format_float(value: float) -> str:
    """Shortest round-tripping representation, blank for None or NaN."""
    if value is None or value != value:
        return ""
    return repr(float(value))
