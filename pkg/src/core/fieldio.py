"""Field2D files: little-endian binary with a 16-byte header, or CSV for small grids.

Binary layout: magic b"F2D1", u32 M, two reserved u32 (zero), then M*M
float64 values in row-major order.
"""

import io
import logging
import struct
from pathlib import Path
from typing import Union

import numpy as np

from src.utils import atomic_write_bytes, atomic_write_text
from .errors import GridError

logger = logging.getLogger(__name__)

MAGIC = b"F2D1"
HEADER = struct.Struct("<4sIII")
CSV_MAX_M = 256

PathLike = Union[str, Path]


def encode_field(field: np.ndarray) -> bytes:
    field = np.asarray(field, dtype=float)
    if field.ndim != 2 or field.shape[0] != field.shape[1]:
        raise GridError(f"Fields must be square M x M arrays, got shape {field.shape}")
    M = field.shape[0]
    return HEADER.pack(MAGIC, M, 0, 0) + field.astype("<f8").tobytes(order="C")


def decode_field(data: bytes) -> np.ndarray:
    if len(data) < HEADER.size:
        raise GridError("Field file is shorter than its header")
    magic, M, _, _ = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise GridError(f"Bad field magic {magic!r}, expected {MAGIC!r}")
    expected = HEADER.size + 8 * M * M
    if len(data) != expected:
        raise GridError(f"Field file for M={M} must hold {expected} bytes, got {len(data)}")
    values = np.frombuffer(data, dtype="<f8", offset=HEADER.size)
    return values.reshape(M, M).astype(float)


def write_field(path: PathLike, field: np.ndarray) -> Path:
    """Write a field atomically; a .csv suffix selects the text format."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        field = np.asarray(field, dtype=float)
        if field.shape[0] > CSV_MAX_M:
            raise GridError(f"CSV output is limited to M <= {CSV_MAX_M}")
        buffer = io.StringIO()
        np.savetxt(buffer, field, delimiter=",", fmt="%.17g")
        atomic_write_text(path, buffer.getvalue())
    else:
        atomic_write_bytes(path, encode_field(field))
    logger.debug("Wrote field %s", path)
    return path


def read_field(path: PathLike) -> np.ndarray:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        field = np.loadtxt(path, delimiter=",", ndmin=2)
        if field.shape[0] != field.shape[1]:
            raise GridError(f"CSV field {path} is not square: {field.shape}")
        return field
    return decode_field(path.read_bytes())
