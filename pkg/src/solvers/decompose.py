"""Mask-free cartoon/texture decomposition by smoothed-l0 continuation."""

import logging
import time
from typing import Callable, Optional, Tuple

import numpy as np

from src.config.solver import SolverConfig
from src.models.errors import DimensionError
from src.models.types import CoefficientPair, DecompositionResult, IterationRecord
from src.operators.combined import CombinedOperator, feasibility_projection, min_l2_init
from src.solvers.sl0 import make_sigma_schedule, smoothed_l0_ascent_direction, smoothed_l0_value
from src.solvers.tv import tv_value

logger = logging.getLogger(__name__)

# Entries below this fraction of max|s| count as zero in sparsity reports
SPARSITY_RTOL = 1e-8


def sparsity(s: np.ndarray, rtol: float = SPARSITY_RTOL) -> int:
    s = np.abs(np.asarray(s))
    if s.size == 0 or s.max() == 0:
        return 0
    return int(np.count_nonzero(s > rtol * s.max()))


def image_vector(c: np.ndarray, comb: CombinedOperator) -> Tuple[np.ndarray, Tuple[int, int]]:
    """Flatten c and return it with the raster shape its layers are reported in"""
    c = np.asarray(c, dtype=np.float64)
    if c.size != comb.n_pixels:
        raise DimensionError(
            f"image has {c.size} pixels, dictionaries expect {comb.n_pixels}"
        )
    grid_shape = c.shape if c.ndim == 2 else comb.image_shape
    return c.ravel(), grid_shape


def layer_record(comb: CombinedOperator, s: CoefficientPair, c: np.ndarray,
                 grid_shape: Tuple[int, int], n: int, sigma: float,
                 lam: Optional[float] = None,
                 mask: Optional[np.ndarray] = None) -> IterationRecord:
    residual = comb.residual(s, c)
    if mask is not None:
        residual = residual * mask
    cartoon = comb.cartoon.forward(s.s2).reshape(grid_shape)
    return IterationRecord(
        n=n,
        sigma=float(sigma),
        lambda_=lam,
        residual=float(np.linalg.norm(residual)),
        f0_texture=s.s1.size - smoothed_l0_value(s.s1, sigma),
        f0_cartoon=s.s2.size - smoothed_l0_value(s.s2, sigma),
        tv_cartoon=tv_value(cartoon, 0.0),
    )


def _result(comb: CombinedOperator, s: CoefficientPair, shape, history) -> DecompositionResult:
    return DecompositionResult(
        s1=s.s1,
        s2=s.s2,
        c1=comb.texture.forward(s.s1).reshape(shape),
        c2=comb.cartoon.forward(s.s2).reshape(shape),
        history=history,
    )


def decompose(c: np.ndarray, comb: CombinedOperator,
              cfg: Optional[SolverConfig] = None,
              callback: Optional[Callable[[int, CoefficientPair], None]] = None) -> DecompositionResult:
    """
    Split a fully observed image into texture (A s1) and cartoon (B s2) layers

    Minimizes the smoothed zero-norm of (s1, s2) subject to A s1 + B s2 = c:
    start from the minimum-l2 solution, then for each sigma take
    `cfg.n_inner` steps s <- s - mu * ascent_direction(s, sigma) per layer with
    feasibility projections, so every returned pair satisfies the constraint.

    Args:
        c: Image (2-D grid or flat vector of comb.n_pixels values)
        comb: Texture and cartoon dictionaries
        cfg: Continuation parameters; settings defaults when omitted
        callback: Called as callback(n, s) after outer iteration n

    Returns:
        DecompositionResult with layers shaped like `c` and one diagnostics
        record per outer iteration
    """
    cfg = cfg or SolverConfig.from_settings()
    c_vec, grid_shape = image_vector(c, comb)
    out_shape = np.shape(c)
    started = time.perf_counter()

    s = min_l2_init(comb, c_vec)
    if not (np.any(s.s1) or np.any(s.s2)):
        logger.info("Zero image: returning zero layers")
        return _result(comb, s, out_shape, [])

    schedule = make_sigma_schedule(s.stacked(), cfg.n_outer, cfg.sigma_decay)
    history = []
    for n, sigma in enumerate(schedule, 1):
        for _ in range(cfg.n_inner):
            s = CoefficientPair(
                s.s1 - cfg.mu_texture * smoothed_l0_ascent_direction(s.s1, sigma),
                s.s2 - cfg.mu_cartoon * smoothed_l0_ascent_direction(s.s2, sigma),
            )
            if cfg.project_every_step:
                s = feasibility_projection(comb, s, c_vec)
        if not cfg.project_every_step:
            s = feasibility_projection(comb, s, c_vec)

        record = layer_record(comb, s, c_vec, grid_shape, n, sigma)
        history.append(record)
        logger.info(
            f"decompose n={n} sigma={sigma:.4g} residual={record['residual']:.3e} "
            f"l0~({record['f0_texture']:.1f}, {record['f0_cartoon']:.1f})"
        )
        if callback is not None:
            callback(n, s)

    logger.info(f"Decomposition finished in {time.perf_counter() - started:.3f}s")
    return _result(comb, s, out_shape, history)
