"""
Multiscale cartoon dictionary: a critically sampled, periodized orthonormal
2-D wavelet transform.

It stands in for a curvelet frame. The default filter is the 4-tap Daubechies
pair ("db2"), whose synthesis lowpass taps are

    h = ((1 + sqrt3), (3 + sqrt3), (3 - sqrt3), (1 - sqrt3)) / (4 sqrt2)
      ~ (0.48296291, 0.83651630, 0.22414387, -0.12940952)

with highpass g[k] = (-1)^k h[3 - k]. Periodization keeps the transform square
and orthonormal for every even length, so analysis is the exact adjoint and
inverse of synthesis (a Parseval frame with A A^T = A^T A = I).
"""

import warnings
from typing import Tuple

import numpy as np
import pywt

from src.models.errors import DimensionError, ParameterError
from src.operators.base import Backend, DictionaryOperator

SQRT3 = np.sqrt(3.0)
DB2_LOWPASS = np.array([1 + SQRT3, 3 + SQRT3, 3 - SQRT3, 1 - SQRT3]) / (4 * np.sqrt(2.0))

_MODE = "periodization"


def _check_shape(shape: Tuple[int, int], levels: int) -> None:
    if levels < 1:
        raise DimensionError(f"levels must be positive, got {levels}")
    height, width = shape
    step = 2 ** levels
    if height < 1 or width < 1 or height % step or width % step:
        raise DimensionError(
            f"image dimensions {height}x{width} must be divisible by 2^levels = {step}"
        )


def _slices(shape: Tuple[int, int], levels: int, wavelet: str):
    _, slices = pywt.coeffs_to_array(_wavedec(np.zeros(shape), levels, wavelet))
    return slices


def _wavedec(img: np.ndarray, levels: int, wavelet: str):
    # Levels beyond pywt's boundary-effect limit are fine under periodization.
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        return pywt.wavedec2(img, wavelet, mode=_MODE, level=levels)


def multiscale_analyze(img: np.ndarray, levels: int, wavelet: str = "db2") -> np.ndarray:
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2:
        raise DimensionError(f"expected a 2-D image, got {img.ndim}-D")
    _check_shape(img.shape, levels)
    array, _ = pywt.coeffs_to_array(_wavedec(img, levels, wavelet))
    return array.ravel()


def multiscale_synthesize(s: np.ndarray, levels: int, shape: Tuple[int, int],
                          wavelet: str = "db2", slices=None) -> np.ndarray:
    _check_shape(shape, levels)
    s = np.asarray(s, dtype=np.float64)
    if s.size != shape[0] * shape[1]:
        raise DimensionError(
            f"expected {shape[0] * shape[1]} wavelet coefficients, got {s.size}"
        )
    if slices is None:
        slices = _slices(shape, levels, wavelet)
    coeffs = pywt.array_to_coeffs(s.reshape(shape), slices, output_format="wavedec2")
    return pywt.waverec2(coeffs, wavelet, mode=_MODE)


class MultiscaleDictionary(DictionaryOperator):
    backend = Backend.MULTISCALE
    tight_frame = True

    def __init__(self, shape: Tuple[int, int], levels: int = 6, wavelet: str = "db2"):
        _check_shape(shape, levels)
        wave = pywt.Wavelet(wavelet)
        if not wave.orthogonal:
            raise ParameterError(f"wavelet '{wavelet}' is not orthogonal")
        super().__init__(shape[0] * shape[1], shape[0] * shape[1], tuple(shape))
        self.levels = levels
        self.wavelet = wavelet
        self._slices = _slices(self.image_shape, levels, wavelet)

    def _forward(self, s: np.ndarray) -> np.ndarray:
        return multiscale_synthesize(
            s, self.levels, self.image_shape, self.wavelet, slices=self._slices
        ).ravel()

    def _adjoint(self, y: np.ndarray) -> np.ndarray:
        return multiscale_analyze(y.reshape(self.image_shape), self.levels, self.wavelet)
