import dataclasses
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Union

from src.config.settings import settings
from src.models.errors import ParameterError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverConfig:
    """Continuation parameters shared by decomposition and inpainting

    Step sizes are expressed in units of sigma^2: a step mu moves the
    coefficients by mu * sigma^2 against the true gradient of the smoothed norm.
    """

    n_outer: int = 5
    n_inner: int = 10
    sigma_decay: float = 0.5
    mu_texture: float = 2.0
    mu_cartoon: float = 2.0
    # Project onto A s1 + B s2 = c after every inner step (False: once per sigma)
    project_every_step: bool = True

    def __post_init__(self):
        if self.n_outer < 1:
            raise ParameterError(f"n_outer must be >= 1, got {self.n_outer}")
        if self.n_inner < 1:
            raise ParameterError(f"n_inner must be >= 1, got {self.n_inner}")
        if not 0.0 < self.sigma_decay < 1.0:
            raise ParameterError(
                f"sigma_decay must lie in (0, 1), got {self.sigma_decay}"
            )
        if self.mu_texture <= 0 or self.mu_cartoon <= 0:
            raise ParameterError(
                f"step sizes must be > 0, got {self.mu_texture}, {self.mu_cartoon}"
            )

    @classmethod
    def from_settings(cls, **overrides: Any) -> "SolverConfig":
        values: Dict[str, Any] = {
            "n_outer": settings.OUTER_ITERATIONS,
            "n_inner": settings.INNER_ITERATIONS,
            "sigma_decay": settings.SIGMA_DECAY,
            "mu_texture": settings.STEP_SIZE,
            "mu_cartoon": settings.STEP_SIZE,
        }
        values.update(_known(cls, overrides))
        return cls(**values)


@dataclass(frozen=True)
class InpaintConfig(SolverConfig):
    lambda_max: float = 2.0
    gamma: float = 0.1
    mu_tv: float = 0.1
    eps_tv: float = 1e-3
    reimpose: bool = True
    line_search: bool = False

    def __post_init__(self):
        super().__post_init__()
        if self.lambda_max <= 0:
            raise ParameterError(f"lambda_max must be > 0, got {self.lambda_max}")
        if self.gamma < 0:
            raise ParameterError(f"gamma must be >= 0, got {self.gamma}")
        if self.mu_tv <= 0:
            raise ParameterError(f"mu_tv must be > 0, got {self.mu_tv}")
        if self.eps_tv <= 0:
            raise ParameterError(f"eps_tv must be > 0, got {self.eps_tv}")
        if not 1.0 <= self.lambda_max <= 2.0:
            logger.warning(
                f"lambda_max={self.lambda_max} is outside the usual range [1, 2]"
            )

    @classmethod
    def from_settings(cls, **overrides: Any) -> "InpaintConfig":
        values: Dict[str, Any] = {
            "n_outer": settings.OUTER_ITERATIONS,
            "n_inner": settings.INNER_ITERATIONS,
            "sigma_decay": settings.SIGMA_DECAY,
            "mu_texture": settings.STEP_SIZE,
            "mu_cartoon": settings.STEP_SIZE,
            "lambda_max": settings.LAMBDA_MAX,
            "gamma": settings.TV_WEIGHT,
            "mu_tv": settings.TV_STEP,
            "eps_tv": settings.TV_EPSILON,
        }
        values.update(_known(cls, overrides))
        return cls(**values)


def _known(cls, overrides: Dict[str, Any]) -> Dict[str, Any]:
    names = {f.name for f in dataclasses.fields(cls)}
    return {k: v for k, v in overrides.items() if k in names and v is not None}


_BOOL_WORDS = {"true": True, "1": True, "yes": True, "on": True,
               "false": False, "0": False, "no": False, "off": False}


def parse_bool(text: str) -> bool:
    try:
        return _BOOL_WORDS[text.strip().lower()]
    except KeyError:
        raise ParameterError(f"expected a boolean, got '{text}'")


def load_config_file(path: Union[str, Path], allowed: Dict[str, type]) -> Dict[str, Any]:
    """
    Parse a key=value configuration file

    Args:
        path: File with one `key = value` per line; blank lines and lines
            starting with '#' are ignored
        allowed: Mapping of accepted keys to the type their value converts to

    Returns:
        Dictionary of converted values
    """
    values: Dict[str, Any] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParameterError(f"{path}:{lineno}: expected key=value, got '{line}'")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in allowed:
            raise ParameterError(f"{path}:{lineno}: unknown key '{key}'")
        kind = allowed[key]
        try:
            values[key] = parse_bool(value) if kind is bool else kind(value)
        except ValueError as e:
            raise ParameterError(f"{path}:{lineno}: bad value for '{key}': {e}")
    logger.debug(f"Loaded {len(values)} settings from {path}")
    return values
