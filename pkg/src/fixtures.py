"""Seeded synthetic cartoon + texture images and random masks."""

from typing import Optional, Tuple

import numpy as np

from src.models.errors import ParameterError


def synthetic_layers(size: int = 64, block: int = 32, step_column: Optional[int] = None,
                     amplitude: float = 0.3,
                     frequency: Tuple[int, int] = (8, 8)) -> Tuple[np.ndarray, np.ndarray]:
    """
    Cartoon and texture layers of a size x size test image

    The cartoon is a vertical half-plane step of height 1 at `step_column`
    (default 5/16 of the width, off the block grid). The texture repeats one
    orthonormal-DCT atom of the given frequency in every block, scaled to peak
    value `amplitude`.
    """
    if size % block:
        raise ParameterError(f"size {size} is not a multiple of block {block}")
    if step_column is None:
        step_column = size * 5 // 16
    cols = np.arange(size)
    cartoon = np.tile((cols >= step_column).astype(np.float64), (size, 1))

    row_freq, col_freq = frequency
    local = np.arange(size) % block
    rows_wave = np.cos(np.pi * (2 * local + 1) * row_freq / (2 * block))
    cols_wave = np.cos(np.pi * (2 * local + 1) * col_freq / (2 * block))
    texture = amplitude * np.outer(rows_wave, cols_wave)
    return cartoon, texture


def random_mask(shape: Tuple[int, int], missing_fraction: float, seed: int) -> np.ndarray:
    """Boolean mask (True = known) with exactly round(fraction * N) missing pixels"""
    if not 0.0 <= missing_fraction < 1.0:
        raise ParameterError(f"missing fraction must lie in [0, 1), got {missing_fraction}")
    rng = np.random.default_rng(seed)
    total = int(np.prod(shape))
    missing = rng.choice(total, size=int(round(missing_fraction * total)), replace=False)
    mask = np.ones(total, dtype=bool)
    mask[missing] = False
    return mask.reshape(shape)


def to_unit_range(img: np.ndarray, low: float, high: float) -> np.ndarray:
    """Affine map of [low, high] onto [0, 1]"""
    return (np.asarray(img, dtype=np.float64) - low) / (high - low)
