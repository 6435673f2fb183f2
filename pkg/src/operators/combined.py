"""
The combined dictionary [A B] and its projections.

A is the texture dictionary and B the cartoon dictionary. The minimum-norm
pseudo-inverse is taken through the pixel-space Gram matrix A A^T + B B^T,
which is the small dimension at desk scale; two Parseval frames skip the
factorization entirely since the Gram matrix is then 2I.
"""

import logging
from typing import Tuple

import numpy as np

from src.models.errors import DimensionError
from src.models.types import CoefficientPair
from src.operators.base import DictionaryOperator
from src.operators.linalg import factorize_gram, solve_gram

logger = logging.getLogger(__name__)


class CombinedOperator:
    def __init__(self, texture: DictionaryOperator, cartoon: DictionaryOperator):
        if texture.n_pixels != cartoon.n_pixels:
            raise DimensionError(
                f"dictionaries disagree on image size: {texture.n_pixels} vs {cartoon.n_pixels}"
            )
        self.texture = texture
        self.cartoon = cartoon

    @property
    def n_pixels(self) -> int:
        return self.texture.n_pixels

    @property
    def image_shape(self) -> Tuple[int, int]:
        return self.cartoon.image_shape

    @property
    def tight_frames(self) -> bool:
        return self.texture.tight_frame and self.cartoon.tight_frame

    def forward(self, s: CoefficientPair) -> np.ndarray:
        """A s1 + B s2"""
        return self.texture.forward(s.s1) + self.cartoon.forward(s.s2)

    def adjoint(self, y: np.ndarray) -> CoefficientPair:
        """(A^T y, B^T y)"""
        return CoefficientPair(self.texture.adjoint(y), self.cartoon.adjoint(y))

    def gram(self) -> np.ndarray:
        return self.texture.gram() + self.cartoon.gram()

    def pseudo_inverse(self, y: np.ndarray) -> CoefficientPair:
        """[A B]^dagger y = [A B]^T (A A^T + B B^T)^-1 y"""
        y = np.asarray(y, dtype=np.float64).ravel()
        if y.size != self.n_pixels:
            raise DimensionError(f"expected {self.n_pixels} pixels, got {y.size}")
        if self.tight_frames:
            return CoefficientPair(self.texture.adjoint(y) / 2.0, self.cartoon.adjoint(y) / 2.0)
        factor = factorize_gram(self.gram(), kind="combined gram")
        return self.adjoint(solve_gram(factor, y))

    def frame_bound(self) -> float:
        """Largest eigenvalue of A A^T + B B^T (squared operator norm of [A B])"""
        if self.tight_frames:
            return 2.0
        return float(np.linalg.eigvalsh(self.gram())[-1])

    def residual(self, s: CoefficientPair, c: np.ndarray) -> np.ndarray:
        return np.asarray(c, dtype=np.float64).ravel() - self.forward(s)


def forward(op: DictionaryOperator, s: np.ndarray) -> np.ndarray:
    return op.forward(s)


def adjoint(op: DictionaryOperator, y: np.ndarray) -> np.ndarray:
    return op.adjoint(y)


def orth_complement_projection(op: DictionaryOperator, y: np.ndarray) -> np.ndarray:
    """
    Project a coefficient vector onto the null space of A

    Returns (I - A^T (A A^T)^-1 A) y, which is idempotent and annihilates the
    range of A^T.

    Raises:
        DimensionError: if y does not have n_coeffs entries
        SingularOperatorError: if A A^T cannot be factorized
    """
    y = np.asarray(y, dtype=np.float64).ravel()
    if y.size != op.n_coeffs:
        raise DimensionError(f"expected {op.n_coeffs} coefficients, got {y.size}")
    return y - op.pseudo_inverse(op.forward(y))


def min_l2_init(comb: CombinedOperator, c: np.ndarray) -> CoefficientPair:
    """Minimum-l2-norm solution of A s1 + B s2 = c"""
    return comb.pseudo_inverse(c)


def feasibility_projection(comb: CombinedOperator, s: CoefficientPair,
                           c: np.ndarray) -> CoefficientPair:
    """l2-nearest point to s on the affine set {A s1 + B s2 = c}"""
    correction = comb.pseudo_inverse(comb.residual(s, c))
    return CoefficientPair(s.s1 + correction.s1, s.s2 + correction.s2)
