"""
Smoothed-l0 machinery.

F_sigma(s) = sum_i exp(-s_i^2 / 2 sigma^2) counts (approximately) the zero
entries of s, so m - F_sigma(s) approximates ||s||_0. Shrinking sigma along a
decreasing schedule, warm-starting each level from the previous one, avoids the
local optima F_sigma has at small sigma.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from src.models.errors import DegenerateInputError, ParameterError
from src.operators.base import DictionaryOperator

logger = logging.getLogger(__name__)


def _check_sigma(sigma: float) -> None:
    if not sigma > 0:
        raise ParameterError(f"sigma must be > 0, got {sigma}")


@dataclass(frozen=True)
class SigmaSchedule:
    values: Tuple[float, ...]

    def __post_init__(self):
        if len(self.values) < 1:
            raise ParameterError("sigma schedule must hold at least one value")
        if any(not v > 0 for v in self.values):
            raise ParameterError(f"sigma values must be positive, got {self.values}")
        if any(b >= a for a, b in zip(self.values, self.values[1:])):
            raise ParameterError(f"sigma values must strictly decrease, got {self.values}")

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)


def smoothed_l0_value(s: np.ndarray, sigma: float) -> float:
    _check_sigma(sigma)
    s = np.asarray(s, dtype=np.float64)
    return float(np.sum(np.exp(-(s * s) / (2.0 * sigma * sigma))))


def smoothed_l0_ascent_direction(s: np.ndarray, sigma: float) -> np.ndarray:
    """
    Entries s_i exp(-s_i^2 / 2 sigma^2)

    This is sigma^2 times the gradient of m - F_sigma; step sizes absorb the
    sigma^2 factor.
    """
    _check_sigma(sigma)
    s = np.asarray(s, dtype=np.float64)
    return s * np.exp(-(s * s) / (2.0 * sigma * sigma))


def make_sigma_schedule(s_init: np.ndarray, n: int, decay: float = 0.5) -> SigmaSchedule:
    """
    Geometric schedule sigma_k = 2 max|s_init| * decay^k, k = 0..n-1

    Raises:
        DegenerateInputError: if s_init is all zero (already maximally sparse)
        ParameterError: if n < 1 or decay is outside (0, 1)
    """
    if n < 1:
        raise ParameterError(f"schedule length must be >= 1, got {n}")
    if not 0.0 < decay < 1.0:
        raise ParameterError(f"decay must lie in (0, 1), got {decay}")
    peak = float(np.max(np.abs(s_init))) if np.size(s_init) else 0.0
    if peak == 0.0:
        raise DegenerateInputError("cannot build a sigma schedule from an all-zero vector")
    first = 2.0 * peak
    return SigmaSchedule(tuple(first * decay ** k for k in range(n)))


def backtracking_step(cost: Callable[[np.ndarray], float], s: np.ndarray,
                      direction: np.ndarray, mu: float, shrink: float = 0.5,
                      max_halvings: int = 20) -> float:
    """
    Largest step mu * shrink^j (j <= max_halvings) that does not increase `cost`

    Returns 0.0 when no tried step decreases the cost.
    """
    baseline = cost(s)
    step = mu
    for _ in range(max_halvings + 1):
        if cost(s - step * direction) <= baseline:
            return step
        step *= shrink
    logger.debug(f"Line search found no descent step from mu={mu}")
    return 0.0


def sl0_solve(phi: DictionaryOperator, b: np.ndarray, schedule: SigmaSchedule,
              n_inner: int, mu: float = 2.0) -> np.ndarray:
    """
    Approximate sparsest solution of phi @ alpha = b

    Starts from the minimum-l2 solution; for each sigma takes `n_inner`
    gradient steps on the smoothed norm, each followed by a projection back
    onto the feasible set.

    Raises:
        ParameterError: if n_inner < 1 or mu <= 0
        SingularOperatorError: if phi phi^T cannot be factorized
    """
    if n_inner < 1:
        raise ParameterError(f"inner iteration count must be >= 1, got {n_inner}")
    if not mu > 0:
        raise ParameterError(f"step size must be > 0, got {mu}")
    b = np.asarray(b, dtype=np.float64).ravel()

    alpha = phi.pseudo_inverse(b)
    for sigma in schedule:
        for _ in range(n_inner):
            alpha = alpha - mu * smoothed_l0_ascent_direction(alpha, sigma)
            alpha = alpha + phi.pseudo_inverse(b - phi.forward(alpha))
        logger.debug(
            f"sigma={sigma:.4g} residual={np.linalg.norm(b - phi.forward(alpha)):.3e}"
        )
    return alpha
