"""Linear synthesis dictionaries: coefficients -> image."""

from abc import ABC, abstractmethod
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from src.models.errors import DimensionError
from src.operators.linalg import factorize_gram, solve_gram


class Backend(str, Enum):
    EXPLICIT = "explicit-matrix"
    BLOCK_DCT = "block-dct"
    MULTISCALE = "multiscale-wavelet"


class DictionaryOperator(ABC):
    """
    A linear synthesis operator of shape (n_pixels, n_coeffs)

    `forward` maps a coefficient vector to an image vector, `adjoint` maps an
    image vector back to coefficient space. Subclasses implement `_forward` and
    `_adjoint` on flat float64 vectors whose lengths have already been checked.
    Instances are immutable once built and may be shared across threads.
    """

    backend: Backend
    # True when forward(adjoint(y)) == y for every image y (A A^T = I)
    tight_frame: bool = False

    def __init__(self, n_pixels: int, n_coeffs: int,
                 image_shape: Optional[Tuple[int, int]] = None):
        if n_pixels < 1 or n_coeffs < 1:
            raise DimensionError(
                f"operator dimensions must be positive, got {n_pixels}x{n_coeffs}"
            )
        self.n_pixels = n_pixels
        self.n_coeffs = n_coeffs
        self.image_shape = image_shape if image_shape is not None else (1, n_pixels)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.n_pixels, self.n_coeffs)

    @abstractmethod
    def _forward(self, s: np.ndarray) -> np.ndarray:
        ...

    @abstractmethod
    def _adjoint(self, y: np.ndarray) -> np.ndarray:
        ...

    def forward(self, s: np.ndarray) -> np.ndarray:
        """Synthesize an image vector (length n_pixels) from coefficients"""
        s = np.asarray(s, dtype=np.float64)
        if s.size != self.n_coeffs:
            raise DimensionError(
                f"{self.backend.value} forward expects {self.n_coeffs} coefficients, got {s.size}"
            )
        return self._forward(s.ravel())

    def adjoint(self, y: np.ndarray) -> np.ndarray:
        """Apply A^T to an image vector (length n_pixels)"""
        y = np.asarray(y, dtype=np.float64)
        if y.size != self.n_pixels:
            raise DimensionError(
                f"{self.backend.value} adjoint expects {self.n_pixels} pixels, got {y.size}"
            )
        return self._adjoint(y.ravel())

    def gram(self) -> np.ndarray:
        """Dense A A^T, built column by column unless the operator is a tight frame"""
        if self.tight_frame:
            return np.eye(self.n_pixels)
        columns = [self._forward(self._adjoint(e)) for e in np.eye(self.n_pixels)]
        return np.column_stack(columns)

    def pseudo_inverse(self, y: np.ndarray) -> np.ndarray:
        """Minimum-norm solution of A s = y, i.e. A^T (A A^T)^-1 y"""
        y = np.asarray(y, dtype=np.float64).ravel()
        if y.size != self.n_pixels:
            raise DimensionError(
                f"pseudo-inverse expects {self.n_pixels} pixels, got {y.size}"
            )
        if self.tight_frame:
            return self._adjoint(y)
        factor = factorize_gram(self.gram(), kind=f"{self.backend.value} gram")
        return self._adjoint(solve_gram(factor, y))

    def __repr__(self) -> str:
        return (
            f"{type(self).__name__}(n_pixels={self.n_pixels}, "
            f"n_coeffs={self.n_coeffs}, tight_frame={self.tight_frame})"
        )
