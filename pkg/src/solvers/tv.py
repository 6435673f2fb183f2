"""Isotropic discrete total variation with Neumann boundary."""

import numpy as np

from src.models.errors import DimensionError, ParameterError
from src.models.types import GradientField


def _as_grid(img: np.ndarray) -> np.ndarray:
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2 or img.size == 0:
        raise DimensionError(f"expected a non-empty 2-D grid, got shape {img.shape}")
    return img


def gradient(img: np.ndarray) -> GradientField:
    """Forward differences; zero in the last column (gx) and last row (gy)"""
    img = _as_grid(img)
    gx = np.zeros_like(img)
    gy = np.zeros_like(img)
    gx[:, :-1] = img[:, 1:] - img[:, :-1]
    gy[:-1, :] = img[1:, :] - img[:-1, :]
    return GradientField(gx, gy)


def divergence(field: GradientField) -> np.ndarray:
    """Backward-difference divergence, the negative adjoint of `gradient`"""
    gx, gy = (_as_grid(g) for g in field)
    if gx.shape != gy.shape:
        raise DimensionError(f"field components differ in shape: {gx.shape} vs {gy.shape}")
    div = np.zeros_like(gx)
    div[:, :-1] += gx[:, :-1]
    div[:, 1:] -= gx[:, :-1]
    div[:-1, :] += gy[:-1, :]
    div[1:, :] -= gy[:-1, :]
    return div


def tv_value(img: np.ndarray, eps: float = 0.0) -> float:
    """Sum over pixels of sqrt(gx^2 + gy^2 + eps^2); plain isotropic TV at eps = 0"""
    if eps < 0:
        raise ParameterError(f"eps must be >= 0, got {eps}")
    gx, gy = gradient(img)
    return float(np.sum(np.sqrt(gx * gx + gy * gy + eps * eps)))


def tv_gradient(img: np.ndarray, eps: float) -> np.ndarray:
    """Exact gradient of tv_value(., eps): -div(grad u / rho)"""
    if not eps > 0:
        raise ParameterError(f"eps must be > 0 for the TV gradient, got {eps}")
    gx, gy = gradient(img)
    rho = np.sqrt(gx * gx + gy * gy + eps * eps)
    return -divergence(GradientField(gx / rho, gy / rho))


def tv_correction_step(img: np.ndarray, mu: float, eps: float) -> np.ndarray:
    """One curvature step img - mu * dTV/dimg; values are not clamped"""
    if not mu > 0:
        raise ParameterError(f"mu must be > 0, got {mu}")
    img = _as_grid(img)
    return img - mu * tv_gradient(img, eps)
