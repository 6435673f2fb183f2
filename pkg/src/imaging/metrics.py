import math
from typing import Optional

import numpy as np

from src.models.errors import DimensionError, ParameterError


def psnr(a: np.ndarray, b: np.ndarray, missing_of: Optional[np.ndarray] = None) -> float:
    """
    Peak signal-to-noise ratio in dB with peak value 1.0

    Args:
        a, b: Images of the same shape
        missing_of: Optional mask (1 = known); when given only the pixels it
            marks missing (0) are compared

    Returns:
        10 log10(1 / MSE), or math.inf for identical images
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionError(f"image shapes differ: {a.shape} vs {b.shape}")
    diff = a - b
    if missing_of is not None:
        region = np.asarray(missing_of)
        if region.shape != a.shape:
            raise DimensionError(f"mask shape {region.shape} differs from image shape {a.shape}")
        diff = diff[region == 0]
        if diff.size == 0:
            raise ParameterError("mask marks no missing pixel to compare")
    mse = float(np.mean(diff * diff))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(1.0 / mse)
