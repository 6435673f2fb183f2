import logging
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from src.models.errors import DimensionError, ImageParseError
from src.operators.base import Backend, DictionaryOperator

logger = logging.getLogger(__name__)


class ExplicitMatrixOperator(DictionaryOperator):
    """Dictionary stored as a dense matrix"""

    backend = Backend.EXPLICIT

    def __init__(self, matrix: np.ndarray, tight_frame: bool = False,
                 image_shape: Optional[Tuple[int, int]] = None):
        """
        Args:
            matrix: 2-D array of shape (n_pixels, n_coeffs); copied and frozen
            tight_frame: Declare A A^T = I so pseudo-inverses skip factorization
            image_shape: Raster shape of the image vectors, (1, n_pixels) if omitted
        """
        matrix = np.array(matrix, dtype=np.float64)
        if matrix.ndim != 2:
            raise DimensionError(f"matrix must be 2-D, got {matrix.ndim}-D")
        if image_shape is not None and image_shape[0] * image_shape[1] != matrix.shape[0]:
            raise DimensionError(
                f"image shape {image_shape} does not hold {matrix.shape[0]} pixels"
            )
        super().__init__(matrix.shape[0], matrix.shape[1], image_shape)
        matrix.setflags(write=False)
        self.matrix = matrix
        self.tight_frame = tight_frame

    def _forward(self, s: np.ndarray) -> np.ndarray:
        return self.matrix @ s

    def _adjoint(self, y: np.ndarray) -> np.ndarray:
        return self.matrix.T @ y

    def gram(self) -> np.ndarray:
        if self.tight_frame:
            return np.eye(self.n_pixels)
        return self.matrix @ self.matrix.T


def load_matrix(path: Union[str, Path], tight_frame: bool = False) -> ExplicitMatrixOperator:
    """
    Load an explicit dictionary from a plain-text matrix file

    The first line holds "rows cols"; the following lines hold the rows as
    whitespace-separated decimal values.
    """
    data = Path(path).read_bytes()
    text = data.decode("ascii", errors="replace")
    first_break = text.find("\n")
    header = text if first_break < 0 else text[:first_break]
    try:
        rows, cols = (int(tok) for tok in header.split())
    except ValueError:
        raise ImageParseError(0, f"{path}: expected 'rows cols' header, got '{header.strip()}'")
    if rows < 1 or cols < 1:
        raise ImageParseError(0, f"{path}: matrix dimensions must be positive")

    offset = first_break + 1
    values = []
    for line in text[offset:].splitlines(keepends=True):
        tokens = line.split()
        if tokens:
            if len(tokens) != cols:
                raise ImageParseError(
                    offset, f"{path}: row {len(values) + 1} has {len(tokens)} values, expected {cols}"
                )
            try:
                values.append([float(tok) for tok in tokens])
            except ValueError as e:
                raise ImageParseError(offset, f"{path}: {e}")
        offset += len(line)
    if len(values) != rows:
        raise ImageParseError(offset, f"{path}: expected {rows} rows, found {len(values)}")

    logger.info(f"Loaded {rows}x{cols} dictionary from {path}")
    return ExplicitMatrixOperator(np.array(values), tight_frame=tight_frame)


def save_matrix(path: Union[str, Path], matrix: np.ndarray) -> None:
    matrix = np.asarray(matrix, dtype=np.float64)
    lines = [f"{matrix.shape[0]} {matrix.shape[1]}"]
    lines.extend(" ".join(repr(float(v)) for v in row) for row in matrix)
    Path(path).write_text("\n".join(lines) + "\n")
