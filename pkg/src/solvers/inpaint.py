"""
Masked inpainting over the texture/cartoon dictionaries.

The relaxed cost minimized here is

    J = (M1 - F_sigma(s1)) + (M2 - F_sigma(s2))
        + lambda * ||M (c - A s1 - B s2)||^2 + gamma * TV(B s2)

where M selects the known pixels. The equality constraint of the mask-free
decomposition becomes the penalty term, so no projection is applied here.
"""

import logging
import time
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from src.config.solver import InpaintConfig
from src.models.errors import DimensionError, EmptyMaskError, ParameterError
from src.models.types import CoefficientPair, DecompositionResult
from src.operators.combined import CombinedOperator, min_l2_init
from src.solvers.decompose import image_vector, layer_record
from src.solvers.sl0 import (
    backtracking_step,
    make_sigma_schedule,
    smoothed_l0_ascent_direction,
    smoothed_l0_value,
)
from src.solvers.tv import tv_correction_step, tv_value

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LambdaSchedule:
    values: Tuple[float, ...]

    def __post_init__(self):
        if not self.values or any(not v > 0 for v in self.values):
            raise ParameterError(f"lambda values must be positive, got {self.values}")


def lambda_schedule(lambda_max: float, n: int) -> LambdaSchedule:
    """lambda_1 = lambda_max, lambda_{k+1} = lambda_k - lambda_max / n"""
    if not lambda_max > 0:
        raise ParameterError(f"lambda_max must be > 0, got {lambda_max}")
    if n < 1:
        raise ParameterError(f"schedule length must be >= 1, got {n}")
    # Closed form keeps the values exact: 2 * 3 / 5 is 1.2, 2 - 0.4 - 0.4 is not.
    return LambdaSchedule(tuple(lambda_max * (n - k) / n for k in range(n)))


def mask_vector(mask: np.ndarray, n_pixels: int) -> np.ndarray:
    m = np.asarray(mask)
    if m.size != n_pixels:
        raise DimensionError(f"mask has {m.size} entries, image has {n_pixels} pixels")
    m = m.ravel()
    if m.dtype != np.bool_ and not np.isin(m, (0, 1)).all():
        raise ParameterError("mask entries must be 0 (missing) or 1 (known)")
    return m.astype(np.float64)


def _smoothed_tv(img: np.ndarray, eps: float) -> float:
    # Offset so a constant layer costs nothing; the gradient is unchanged.
    return tv_value(img, eps) - eps * img.size


def relaxed_cost(s: CoefficientPair, c: np.ndarray, mask: np.ndarray,
                 comb: CombinedOperator, sigma: float, lam: float, gamma: float,
                 eps_tv: float = 1e-3) -> float:
    c_vec, grid_shape = image_vector(c, comb)
    m = mask_vector(mask, c_vec.size)
    r = m * comb.residual(s, c_vec)
    sparsity = (s.s1.size - smoothed_l0_value(s.s1, sigma)) + (
        s.s2.size - smoothed_l0_value(s.s2, sigma)
    )
    cost = sparsity + lam * float(np.dot(r, r))
    if gamma:
        cartoon = comb.cartoon.forward(s.s2).reshape(grid_shape)
        cost += gamma * _smoothed_tv(cartoon, eps_tv)
    return cost


def data_term_gradient(s: CoefficientPair, c: np.ndarray, mask: np.ndarray,
                       comb: CombinedOperator, lam: float) -> CoefficientPair:
    """Gradient of lambda * ||M (c - A s1 - B s2)||^2 with respect to (s1, s2)"""
    c_vec, _ = image_vector(c, comb)
    m = mask_vector(mask, c_vec.size)
    masked = m * comb.residual(s, c_vec)
    back = comb.adjoint(masked)
    return CoefficientPair(-2.0 * lam * back.s1, -2.0 * lam * back.s2)


def inpaint(c: np.ndarray, mask: np.ndarray, comb: CombinedOperator,
            cfg: Optional[InpaintConfig] = None) -> Tuple[np.ndarray, DecompositionResult]:
    """
    Fill the missing pixels of `c` from its sparse texture and cartoon layers

    Args:
        c: Observed image; values at missing pixels are ignored
        mask: 1/True where the pixel is known, 0/False where it is missing
        comb: Texture and cartoon dictionaries
        cfg: Inpainting parameters; settings defaults when omitted

    Returns:
        The reconstruction A s1 + B s2 (known pixels restored from `c` when
        cfg.reimpose is set) and the full decomposition with diagnostics

    Raises:
        EmptyMaskError: if no pixel is known
    """
    cfg = cfg or InpaintConfig.from_settings()
    c_vec, grid_shape = image_vector(c, comb)
    m = mask_vector(mask, c_vec.size)
    if not m.any():
        raise EmptyMaskError("mask has no known pixel; nothing to inpaint from")
    started = time.perf_counter()

    observed = c_vec * m
    s = min_l2_init(comb, observed)
    lambdas = lambda_schedule(cfg.lambda_max, cfg.n_outer)
    history = []

    if np.any(s.s1) or np.any(s.s2):
        schedule = make_sigma_schedule(s.stacked(), cfg.n_outer, cfg.sigma_decay)
        kappa = comb.frame_bound()
        for n, (sigma, lam) in enumerate(zip(schedule, lambdas.values), 1):
            # Without a projection the data term bounds the usable step.
            step_cap = 1.0 / (1.0 + 2.0 * lam * kappa)
            mu1 = min(cfg.mu_texture, step_cap)
            mu2 = min(cfg.mu_cartoon, step_cap)
            for _ in range(cfg.n_inner):
                grad = data_term_gradient(s, observed, m, comb, lam)
                step = CoefficientPair(
                    mu1 * (smoothed_l0_ascent_direction(s.s1, sigma) + grad.s1),
                    mu2 * (smoothed_l0_ascent_direction(s.s2, sigma) + grad.s2),
                )
                scale = 1.0
                if cfg.line_search:
                    scale = backtracking_step(
                        lambda v: relaxed_cost(
                            CoefficientPair.from_stacked(v, s.s1.size), observed, m,
                            comb, sigma, lam, cfg.gamma, cfg.eps_tv,
                        ),
                        s.stacked(), step.stacked(), 1.0,
                    )
                s = CoefficientPair(s.s1 - scale * step.s1, s.s2 - scale * step.s2)

            if cfg.gamma > 0:
                cartoon = comb.cartoon.forward(s.s2).reshape(grid_shape)
                corrected = tv_correction_step(cartoon, cfg.gamma * cfg.mu_tv, cfg.eps_tv)
                s = CoefficientPair(
                    s.s1, s.s2 + comb.cartoon.pseudo_inverse((corrected - cartoon).ravel())
                )

            record = layer_record(comb, s, observed, grid_shape, n, sigma, lam, mask=m)
            history.append(record)
            logger.info(
                f"inpaint n={n} sigma={sigma:.4g} lambda={lam:.4g} "
                f"masked residual={record['residual']:.3e} tv={record['tv_cartoon']:.3f}"
            )
    else:
        logger.info("All known pixels are zero: returning zero layers")

    c_hat = comb.forward(s)
    if cfg.reimpose:
        c_hat = np.where(m > 0, c_vec, c_hat)

    out_shape = np.shape(c)
    result = DecompositionResult(
        s1=s.s1,
        s2=s.s2,
        c1=comb.texture.forward(s.s1).reshape(out_shape),
        c2=comb.cartoon.forward(s.s2).reshape(out_shape),
        history=history,
    )
    logger.info(f"Inpainting finished in {time.perf_counter() - started:.3f}s")
    return c_hat.reshape(out_shape), result
