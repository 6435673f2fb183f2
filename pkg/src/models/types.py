from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, TypedDict

import numpy as np
from numpy.typing import NDArray

# 2-D float64 raster, values nominally in [0, 1]
ImageGrid = NDArray[np.float64]
# Same shape as its image; True / 1 where the pixel is known
MaskGrid = NDArray[np.bool_]
CoeffVector = NDArray[np.float64]


class CoefficientPair(NamedTuple):
    """Texture coefficients s1 (length M1) and cartoon coefficients s2 (length M2)"""

    s1: CoeffVector
    s2: CoeffVector

    def stacked(self) -> CoeffVector:
        return np.concatenate([self.s1, self.s2])

    @classmethod
    def from_stacked(cls, s: CoeffVector, m1: int) -> "CoefficientPair":
        return cls(s[:m1].copy(), s[m1:].copy())


class GradientField(NamedTuple):
    gx: NDArray[np.float64]
    gy: NDArray[np.float64]


class IterationRecord(TypedDict):
    n: int
    sigma: float
    lambda_: Optional[float]
    residual: float
    f0_texture: float
    f0_cartoon: float
    tv_cartoon: float


class RunReport(TypedDict):
    config: dict
    records: List[IterationRecord]
    timings: dict
    psnr_missing: Optional[float]


@dataclass
class DecompositionResult:
    s1: CoeffVector
    s2: CoeffVector
    c1: NDArray[np.float64]
    c2: NDArray[np.float64]
    history: List[IterationRecord] = field(default_factory=list)

    @property
    def coefficients(self) -> CoefficientPair:
        return CoefficientPair(self.s1, self.s2)

    @property
    def reconstruction(self) -> NDArray[np.float64]:
        return self.c1 + self.c2
