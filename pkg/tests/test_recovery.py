"""
Seeded recovery suites against a brute-force sparsest-solution oracle.

Each suite runs 100 small random instances. Oracle pass counts sit a few
trials below the counts measured for these seeds and schedules. Four planted
atoms in ten rows is near the limit of what smoothed-l0 continuation
recovers, so the two-atoms-per-layer count is low by nature.
"""

from itertools import combinations

import numpy as np
import pytest

from src.config.solver import SolverConfig
from src.operators.combined import CombinedOperator
from src.operators.explicit import ExplicitMatrixOperator
from src.solvers.decompose import decompose
from src.solvers.sl0 import make_sigma_schedule, sl0_solve, smoothed_l0_value

from tests.conftest import unit_columns

pytestmark = pytest.mark.slow

TRIALS = 100
SUPPORT_RTOL = 1e-3


def _subsets(n_columns: int, max_size: int) -> dict:
    return {k: np.array(list(combinations(range(n_columns), k))) for k in range(1, max_size + 1)}


def sparsest_support(phi: np.ndarray, b: np.ndarray, subsets: dict, tol: float = 1e-9) -> frozenset:
    """Smallest column set whose span contains b, by exhaustive least squares"""
    if not np.any(b):
        return frozenset()
    for k, index in subsets.items():
        sub = phi[:, index].transpose(1, 0, 2)  # (n_subsets, rows, k)
        sub_t = sub.transpose(0, 2, 1)
        coeffs = np.linalg.solve(sub_t @ sub, sub_t @ b[:, None])
        residual = np.linalg.norm(sub @ coeffs - b[:, None], axis=(1, 2))
        hits = np.flatnonzero(residual <= tol * np.linalg.norm(b))
        if hits.size:
            return frozenset(index[hits[0]].tolist())
    return None


def support(x: np.ndarray) -> frozenset:
    return frozenset(np.flatnonzero(np.abs(x) > SUPPORT_RTOL * np.max(np.abs(x))).tolist())


def planted(rng: np.random.Generator, size: int, k: int, offset: int = 0) -> np.ndarray:
    """k entries of magnitude U[1, 2] with random signs, placed in [offset, size)"""
    x = np.zeros(size)
    where = offset + rng.choice(size - offset, size=k, replace=False)
    x[where] = rng.uniform(1.0, 2.0, size=k) * rng.choice([-1.0, 1.0], size=k)
    return x


def test_sl0_matches_oracle():
    rng = np.random.default_rng(7)
    subsets = _subsets(20, 3)
    successes = 0
    for _ in range(TRIALS):
        matrix = unit_columns(rng, 10, 20)
        phi = ExplicitMatrixOperator(matrix)
        x = planted(rng, 20, 3)
        b = matrix @ x

        schedule = make_sigma_schedule(phi.pseudo_inverse(b), 200, 0.97)
        alpha = sl0_solve(phi, b, schedule, n_inner=3, mu=2.0)
        oracle = sparsest_support(matrix, b, subsets)
        if oracle == support(x) and support(alpha) == oracle:
            successes += 1
    assert successes >= 80


DECOMPOSE_CFG = SolverConfig(n_outer=30, n_inner=5, sigma_decay=0.7)


def _random_pair(rng):
    a = unit_columns(rng, 10, 20)
    b = unit_columns(rng, 10, 20)
    comb = CombinedOperator(ExplicitMatrixOperator(a), ExplicitMatrixOperator(b))
    return np.hstack([a, b]), comb


def test_decompose_single_atom():
    rng = np.random.default_rng(11)
    successes = 0
    for _ in range(TRIALS):
        matrix, comb = _random_pair(rng)
        x = planted(rng, 40, 1)
        result = decompose(matrix @ x, comb, DECOMPOSE_CFG)
        if support(np.concatenate([result.s1, result.s2])) == support(x):
            successes += 1
    assert successes >= 90


def test_decompose_two_atoms_per_layer():
    rng = np.random.default_rng(13)
    subsets = _subsets(40, 4)
    successes = 0
    for _ in range(TRIALS):
        matrix, comb = _random_pair(rng)
        x = np.concatenate([planted(rng, 20, 2), planted(rng, 20, 2)])
        c = matrix @ x

        result = decompose(c, comb, DECOMPOSE_CFG)
        recovered = np.concatenate([result.s1, result.s2])
        assert np.allclose(matrix @ recovered, c, atol=1e-8)
        oracle = sparsest_support(matrix, c, subsets)
        if oracle == support(x) and support(recovered) == oracle:
            successes += 1
    assert successes >= 12


def test_decompose_sparsity_cost_does_not_increase():
    rng = np.random.default_rng(13)
    monotone = 0
    for _ in range(TRIALS):
        matrix, comb = _random_pair(rng)
        x = np.concatenate([planted(rng, 20, 2), planted(rng, 20, 2)])
        iterates = []
        result = decompose(matrix @ x, comb, DECOMPOSE_CFG, callback=lambda n, s: iterates.append(s))

        final_sigma = result.history[-1]["sigma"]
        costs = [
            s.s1.size + s.s2.size - smoothed_l0_value(s.s1, final_sigma) - smoothed_l0_value(s.s2, final_sigma)
            for s in iterates
        ]
        if all(later <= earlier + 1e-9 for earlier, later in zip(costs, costs[1:])):
            monotone += 1
    assert monotone >= 80
