"""
Grayscale image and mask files.

Binary PGM (P5, maxval 255) is always available. PNG grayscale needs the
optional `png` extra (pypng). Pixels are float64 in [0, 1]; an 8-bit value v
loads as v / 255 and writes back as round-half-up(clamp(x) * 255).
"""

import logging
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from src.models.errors import (
    ImageParseError,
    MaskValidationError,
    ParameterError,
    UnsupportedFormatError,
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"
_WHITESPACE = b" \t\r\n\v\f"


def _header_token(data: bytes, pos: int) -> Tuple[bytes, int, int]:
    """Next whitespace-delimited header token, skipping '#' comments"""
    while pos < len(data):
        if data[pos:pos + 1] == b"#":
            end = data.find(b"\n", pos)
            pos = len(data) if end < 0 else end + 1
        elif data[pos] in _WHITESPACE:
            pos += 1
        else:
            break
    start = pos
    while pos < len(data) and data[pos] not in _WHITESPACE and data[pos:pos + 1] != b"#":
        pos += 1
    if start == pos:
        raise ImageParseError(start, "unexpected end of PGM header")
    return data[start:pos], start, pos


def _header_int(data: bytes, pos: int, name: str) -> Tuple[int, int]:
    token, start, end = _header_token(data, pos)
    if not token.isdigit():
        raise ImageParseError(start, f"PGM {name} must be a decimal integer, got {token!r}")
    return int(token), end


def _decode_pgm(data: bytes) -> np.ndarray:
    if data[:2] != b"P5":
        if len(data) >= 2 and data[:1] == b"P" and data[1:2].isdigit():
            raise UnsupportedFormatError(f"PNM variant {data[:2]!r} is not supported, only P5")
        raise ImageParseError(0, f"bad magic number {data[:2]!r}, expected b'P5'")
    if len(data) < 3 or data[2] not in _WHITESPACE:
        raise ImageParseError(2, "expected whitespace after magic number")

    width, pos = _header_int(data, 2, "width")
    height, pos = _header_int(data, pos, "height")
    maxval, pos = _header_int(data, pos, "maxval")
    if width < 1 or height < 1:
        raise ImageParseError(pos, f"PGM dimensions must be positive, got {width}x{height}")
    if maxval != 255:
        raise UnsupportedFormatError(f"only 8-bit PGM (maxval 255) is supported, got {maxval}")
    if pos >= len(data) or data[pos] not in _WHITESPACE:
        raise ImageParseError(pos, "expected a single whitespace byte before raster data")
    pos += 1

    expected = width * height
    raster = data[pos:]
    if len(raster) != expected:
        raise ImageParseError(
            pos + min(len(raster), expected),
            f"raster holds {len(raster)} bytes, expected {width}x{height} = {expected}",
        )
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width).copy()


def _read_png(path: PathLike) -> np.ndarray:
    png = _png_module()
    width, height, rows, info = png.Reader(filename=str(path)).read()
    if not info.get("greyscale") or info.get("alpha") or info.get("bitdepth") != 8:
        raise UnsupportedFormatError(f"{path}: only 8-bit grayscale PNG without alpha is supported")
    return np.vstack([np.asarray(row, dtype=np.uint8) for row in rows]).reshape(height, width)


def _png_module():
    try:
        import png
    except ImportError:
        raise UnsupportedFormatError("PNG support requires the 'png' extra (pypng)")
    return png


def read_gray8(path: PathLike) -> np.ndarray:
    """Raw 8-bit raster of a PGM or PNG file"""
    data = Path(path).read_bytes()
    if data.startswith(PNG_SIGNATURE):
        return _read_png(path)
    try:
        return _decode_pgm(data)
    except ImageParseError as e:
        raise ImageParseError(e.offset, f"{path}: {e.detail}")


def read_image(path: PathLike) -> np.ndarray:
    raw = read_gray8(path)
    logger.debug(f"Read {raw.shape[1]}x{raw.shape[0]} image from {path}")
    return raw.astype(np.float64) / 255.0


def quantize(img: np.ndarray) -> np.ndarray:
    img = np.asarray(img, dtype=np.float64)
    if not np.all(np.isfinite(img)):
        raise ParameterError("image contains non-finite values")
    # Values are non-negative after clamping, so floor(x + 0.5) rounds half away from zero.
    return np.floor(np.clip(img, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)


def write_gray8(raw: np.ndarray, path: PathLike) -> None:
    raw = np.asarray(raw, dtype=np.uint8)
    if raw.ndim != 2:
        raise ParameterError(f"expected a 2-D raster, got shape {raw.shape}")
    height, width = raw.shape
    if Path(path).suffix.lower() == ".png":
        png = _png_module()
        with open(path, "wb") as fh:
            png.Writer(width, height, greyscale=True, bitdepth=8).write(fh, raw.tolist())
        return
    with open(path, "wb") as fh:
        fh.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
        fh.write(np.ascontiguousarray(raw).tobytes())


def write_image(img: np.ndarray, path: PathLike) -> None:
    write_gray8(quantize(img), path)
    logger.debug(f"Wrote image to {path}")


def read_mask(path: PathLike) -> np.ndarray:
    """Mask file with values 255 (known) and 0 (missing); anything else is rejected"""
    raw = read_gray8(path)
    bad = (raw != 0) & (raw != 255)
    if bad.any():
        row, col = np.argwhere(bad)[0]
        raise MaskValidationError(
            f"{path}: mask pixel ({row}, {col}) has value {raw[row, col]}; only 0 and 255 are allowed"
        )
    return raw == 255


def write_mask(mask: np.ndarray, path: PathLike) -> None:
    write_gray8(np.where(np.asarray(mask, dtype=bool), 255, 0).astype(np.uint8), path)
