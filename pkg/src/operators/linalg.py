import logging
from typing import Tuple

import numpy as np
import scipy.linalg

from src.config.settings import settings
from src.models.errors import SingularOperatorError
from src.utils.cache import get_cache

logger = logging.getLogger(__name__)

# Cholesky diagonal entries below this fraction of the largest one mean the Gram
# matrix is singular to working precision (condition number above ~1e14).
_PIVOT_RTOL = 1e-7

CholeskyFactor = Tuple[np.ndarray, bool]


def factorize_gram(gram: np.ndarray, kind: str = "gram") -> CholeskyFactor:
    """
    Cholesky-factorize a symmetric positive definite Gram matrix

    Factors are cached by content, so repeated projections with the same
    dictionaries reuse the first factorization.

    Raises:
        SingularOperatorError: if the matrix is not numerically positive definite
    """
    cache = get_cache(settings.FACTOR_CACHE_MAX_SIZE)
    key = cache.matrix_key(kind, gram)
    return cache.get_or_compute(key, lambda: _cholesky(gram, kind))


def _cholesky(gram: np.ndarray, kind: str) -> CholeskyFactor:
    try:
        factor = scipy.linalg.cho_factor(gram, lower=True, check_finite=True)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise SingularOperatorError(f"{kind} matrix is not invertible: {e}")
    pivots = np.abs(np.diag(factor[0]))
    if pivots.size and pivots.min() <= _PIVOT_RTOL * pivots.max():
        raise SingularOperatorError(
            f"{kind} matrix is rank deficient (pivot ratio {pivots.min() / pivots.max():.3e})"
        )
    logger.debug(f"Factorized {kind} matrix of size {gram.shape[0]}")
    return factor


def solve_gram(factor: CholeskyFactor, rhs: np.ndarray) -> np.ndarray:
    return scipy.linalg.cho_solve(factor, rhs)
