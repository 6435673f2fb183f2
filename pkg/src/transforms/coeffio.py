"""
Flat binary coefficient files.

Layout (little-endian): 4-byte magic b"SPCF", u32 length, u32 reserved (0),
then `length` float64 values.
"""

import struct
from pathlib import Path
from typing import Union

import numpy as np

from src.models.errors import ImageParseError

MAGIC = b"SPCF"
_HEADER = struct.Struct("<4sII")


def write_coefficients(path: Union[str, Path], s: np.ndarray) -> None:
    s = np.ascontiguousarray(np.asarray(s, dtype="<f8").ravel())
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, s.size, 0))
        fh.write(s.tobytes())


def read_coefficients(path: Union[str, Path]) -> np.ndarray:
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise ImageParseError(len(data), f"{path}: truncated coefficient header")
    magic, length, _ = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ImageParseError(0, f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
    expected = _HEADER.size + 8 * length
    if len(data) != expected:
        raise ImageParseError(
            min(len(data), expected),
            f"{path}: expected {length} coefficients ({expected} bytes), file has {len(data)} bytes",
        )
    return np.frombuffer(data, dtype="<f8", offset=_HEADER.size).astype(np.float64)
