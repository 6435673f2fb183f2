import numpy as np
import pytest

from src.operators.combined import CombinedOperator
from src.operators.explicit import ExplicitMatrixOperator
from src.transforms.block_dct import BlockDctDictionary
from src.transforms.wavelet import MultiscaleDictionary


def unit_columns(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    """Gaussian matrix with unit-norm columns"""
    matrix = rng.standard_normal((rows, cols))
    return matrix / np.linalg.norm(matrix, axis=0)


def pgm_bytes(raw: np.ndarray) -> bytes:
    height, width = raw.shape
    return f"P5\n{width} {height}\n255\n".encode("ascii") + raw.astype(np.uint8).tobytes()


@pytest.fixture
def rng():
    return np.random.default_rng(20240519)


@pytest.fixture
def small_comb():
    """32x32 block-DCT (8x8 blocks) + 2-level wavelet dictionaries"""
    shape = (32, 32)
    return CombinedOperator(BlockDctDictionary(shape, block=8), MultiscaleDictionary(shape, levels=2))


@pytest.fixture
def explicit_comb(rng):
    """Incoherent random 10x20 texture and cartoon dictionaries"""
    return CombinedOperator(
        ExplicitMatrixOperator(unit_columns(rng, 10, 20)),
        ExplicitMatrixOperator(unit_columns(rng, 10, 20)),
    )
