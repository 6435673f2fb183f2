"""
Local (blockwise) DCT texture dictionary.

Coefficient layout: blocks in row-major order, and within each block the
orthonormal type-II DCT coefficients in row-major frequency order. Blocks do
not overlap, so the dictionary is orthonormal.
"""

from typing import Tuple

import numpy as np
from scipy.fft import dctn, idctn

from src.models.errors import DimensionError
from src.operators.base import Backend, DictionaryOperator


def _check_shape(shape: Tuple[int, int], block: int) -> None:
    if block < 1:
        raise DimensionError(f"block size must be positive, got {block}")
    height, width = shape
    if height < 1 or width < 1 or height % block or width % block:
        raise DimensionError(
            f"image dimensions {height}x{width} must be divisible by the DCT block size {block}"
        )


def block_dct_analyze(img: np.ndarray, block: int) -> np.ndarray:
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2:
        raise DimensionError(f"expected a 2-D image, got {img.ndim}-D")
    _check_shape(img.shape, block)
    height, width = img.shape
    tiles = img.reshape(height // block, block, width // block, block).transpose(0, 2, 1, 3)
    return dctn(tiles, type=2, axes=(2, 3), norm="ortho").ravel()


def block_dct_synthesize(s: np.ndarray, block: int, shape: Tuple[int, int]) -> np.ndarray:
    _check_shape(shape, block)
    height, width = shape
    s = np.asarray(s, dtype=np.float64)
    if s.size != height * width:
        raise DimensionError(
            f"expected {height * width} block-DCT coefficients, got {s.size}"
        )
    tiles = idctn(
        s.reshape(height // block, width // block, block, block),
        type=2, axes=(2, 3), norm="ortho",
    )
    return tiles.transpose(0, 2, 1, 3).reshape(height, width)


class BlockDctDictionary(DictionaryOperator):
    backend = Backend.BLOCK_DCT
    tight_frame = True

    def __init__(self, shape: Tuple[int, int], block: int = 32):
        _check_shape(shape, block)
        super().__init__(shape[0] * shape[1], shape[0] * shape[1], tuple(shape))
        self.block = block

    def _forward(self, s: np.ndarray) -> np.ndarray:
        return block_dct_synthesize(s, self.block, self.image_shape).ravel()

    def _adjoint(self, y: np.ndarray) -> np.ndarray:
        return block_dct_analyze(y.reshape(self.image_shape), self.block)
