"""
Command-line front end.

Subcommands: decompose | inpaint | metrics | synth. Exit codes: 0 success,
2 argument/dimension/parameter errors, 3 I/O errors, 4 numeric failures.
Solver settings resolve as: flag > --config file > environment/.env > default.
"""

import argparse
import logging
import math
import sys
import time
from typing import Any, Dict, List, Optional

import numpy as np

from src.config.settings import settings
from src.config.solver import InpaintConfig, SolverConfig, load_config_file, parse_bool
from src.fixtures import random_mask, synthetic_layers, to_unit_range
from src.imaging.imgio import read_image, read_mask, write_image, write_mask
from src.imaging.metrics import psnr
from src.models.errors import (
    DimensionError,
    ImageFormatError,
    ParameterError,
    SingularOperatorError,
)
from src.operators.combined import CombinedOperator
from src.solvers.decompose import decompose
from src.solvers.inpaint import inpaint
from src.transforms.block_dct import BlockDctDictionary
from src.transforms.coeffio import write_coefficients
from src.transforms.wavelet import MultiscaleDictionary
from src.utils.report import format_psnr, make_report, write_report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NUMERIC = 4

# Keys accepted in --config files and the types they convert to
CONFIG_KEYS: Dict[str, type] = {
    "block": int,
    "levels": int,
    "wavelet": str,
    "outer": int,
    "inner": int,
    "sigma_decay": float,
    "mu": float,
    "lambda_max": float,
    "gamma": float,
    "mu_tv": float,
    "eps_tv": float,
    "reimpose": bool,
    "line_search": bool,
    "project_every_step": bool,
}

_DEFAULTS: Dict[str, Any] = {
    "block": settings.BLOCK_SIZE,
    "levels": settings.LEVELS,
    "wavelet": settings.WAVELET,
    "outer": settings.OUTER_ITERATIONS,
    "inner": settings.INNER_ITERATIONS,
    "sigma_decay": settings.SIGMA_DECAY,
    "mu": settings.STEP_SIZE,
    "lambda_max": settings.LAMBDA_MAX,
    "gamma": settings.TV_WEIGHT,
    "mu_tv": settings.TV_STEP,
    "eps_tv": settings.TV_EPSILON,
    "reimpose": True,
    "line_search": False,
    "project_every_step": True,
}


def resolve_options(args: argparse.Namespace) -> Dict[str, Any]:
    """Merge defaults, the optional config file and explicit flags"""
    options = dict(_DEFAULTS)
    if getattr(args, "config", None):
        options.update(load_config_file(args.config, CONFIG_KEYS))
    for key in CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            options[key] = value
    return options


def build_dictionaries(shape, block: int, levels: int, wavelet: str = "db2") -> CombinedOperator:
    return CombinedOperator(
        texture=BlockDctDictionary(shape, block=block),
        cartoon=MultiscaleDictionary(shape, levels=levels, wavelet=wavelet),
    )


def crop_to_multiple(img: np.ndarray, multiple: int) -> np.ndarray:
    height = img.shape[0] - img.shape[0] % multiple
    width = img.shape[1] - img.shape[1] % multiple
    if height == 0 or width == 0:
        raise DimensionError(
            f"image {img.shape[1]}x{img.shape[0]} is smaller than one {multiple}x{multiple} tile"
        )
    if (height, width) != img.shape:
        logger.info(f"Cropped image from {img.shape[1]}x{img.shape[0]} to {width}x{height}")
    return img[:height, :width]


def _load_layers_input(path: str, options: Dict[str, Any], crop: bool) -> np.ndarray:
    img = read_image(path)
    if crop:
        img = crop_to_multiple(img, math.lcm(options["block"], 2 ** options["levels"]))
    return img


def cmd_decompose(args: argparse.Namespace) -> int:
    options = resolve_options(args)
    img = _load_layers_input(args.input, options, args.crop)
    comb = build_dictionaries(img.shape, options["block"], options["levels"], options["wavelet"])
    cfg = SolverConfig(
        n_outer=options["outer"],
        n_inner=options["inner"],
        sigma_decay=options["sigma_decay"],
        mu_texture=options["mu"],
        mu_cartoon=options["mu"],
        project_every_step=options["project_every_step"],
    )

    started = time.perf_counter()
    with np.errstate(over="raise", invalid="raise", divide="raise"):
        result = decompose(img, comb, cfg)
    elapsed = time.perf_counter() - started

    if args.out_texture:
        write_image(result.c1, args.out_texture)
    if args.out_cartoon:
        write_image(result.c2, args.out_cartoon)
    if args.out_coeffs:
        write_coefficients(args.out_coeffs, result.coefficients.stacked())
    if args.report:
        config = {key: options[key] for key in ("outer", "inner", "sigma_decay", "mu", "block", "levels")}
        write_report(args.report, make_report(config, result.history, {"decompose": elapsed}))
    return EXIT_OK


def cmd_inpaint(args: argparse.Namespace) -> int:
    options = resolve_options(args)
    img = _load_layers_input(args.input, options, args.crop)
    mask = read_mask(args.mask)
    if args.crop:
        mask = mask[: img.shape[0], : img.shape[1]]
    if mask.shape != img.shape:
        raise DimensionError(f"mask shape {mask.shape} differs from image shape {img.shape}")
    comb = build_dictionaries(img.shape, options["block"], options["levels"], options["wavelet"])
    cfg = InpaintConfig(
        n_outer=options["outer"],
        n_inner=options["inner"],
        sigma_decay=options["sigma_decay"],
        mu_texture=options["mu"],
        mu_cartoon=options["mu"],
        lambda_max=options["lambda_max"],
        gamma=options["gamma"],
        mu_tv=options["mu_tv"],
        eps_tv=options["eps_tv"],
        reimpose=options["reimpose"],
        line_search=options["line_search"],
    )

    started = time.perf_counter()
    with np.errstate(over="raise", invalid="raise", divide="raise"):
        c_hat, result = inpaint(img, mask, comb, cfg)
    elapsed = time.perf_counter() - started
    write_image(c_hat, args.out)

    quality = None
    if args.truth:
        truth = read_image(args.truth)
        if args.crop:
            truth = truth[: img.shape[0], : img.shape[1]]
        quality = psnr(c_hat, truth, missing_of=mask) if not mask.all() else psnr(c_hat, truth)
        logger.info(f"PSNR over missing pixels: {format_psnr(quality)} dB")

    if args.report:
        config = {
            key: options[key]
            for key in ("outer", "inner", "lambda_max", "gamma", "sigma_decay", "mu", "block", "levels")
        }
        write_report(args.report, make_report(config, result.history, {"inpaint": elapsed}, quality))
    return EXIT_OK


def cmd_metrics(args: argparse.Namespace) -> int:
    a = read_image(args.a)
    b = read_image(args.b)
    mask = read_mask(args.mask) if args.mask else None
    print(format_psnr(psnr(a, b, missing_of=mask)))
    return EXIT_OK


def cmd_synth(args: argparse.Namespace) -> int:
    cartoon, texture = synthetic_layers(args.size, block=args.block, amplitude=args.amplitude)
    truth = to_unit_range(cartoon + texture, -args.amplitude, 1.0 + args.amplitude)
    mask = random_mask(truth.shape, args.missing, args.seed)
    write_image(np.where(mask, truth, 0.0), args.out_image)
    write_mask(mask, args.out_mask)
    if args.out_truth:
        write_image(truth, args.out_truth)
    return EXIT_OK


def _add_solver_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key=value file; flags override it")
    parser.add_argument("--block", type=int, help=f"DCT block size (default {settings.BLOCK_SIZE})")
    parser.add_argument("--levels", type=int, help=f"wavelet levels (default {settings.LEVELS})")
    parser.add_argument("--wavelet", help=f"orthogonal wavelet name (default {settings.WAVELET})")
    parser.add_argument("--outer", type=int, help=f"sigma levels N (default {settings.OUTER_ITERATIONS})")
    parser.add_argument("--inner", type=int, help=f"steps per sigma L (default {settings.INNER_ITERATIONS})")
    parser.add_argument("--sigma-decay", dest="sigma_decay", type=float,
                        help=f"sigma ratio between levels (default {settings.SIGMA_DECAY})")
    parser.add_argument("--mu", type=float, help=f"step size in sigma^2 units (default {settings.STEP_SIZE})")
    parser.add_argument("--crop", action="store_true",
                        help="crop to the largest size the dictionaries accept instead of failing")
    parser.add_argument("--report", help="CSV report path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sl0-layers",
        description="Cartoon/texture decomposition and inpainting by smoothed-l0 continuation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    dec = sub.add_parser("decompose", help="split an image into texture and cartoon layers")
    dec.add_argument("--input", required=True)
    dec.add_argument("--out-texture", dest="out_texture")
    dec.add_argument("--out-cartoon", dest="out_cartoon")
    dec.add_argument("--out-coeffs", dest="out_coeffs", help="stacked [s1; s2] coefficient file")
    dec.add_argument("--project-every-step", dest="project_every_step", type=parse_bool,
                     help="project after every inner step (default true)")
    _add_solver_flags(dec)
    dec.set_defaults(handler=cmd_decompose)

    inp = sub.add_parser("inpaint", help="fill the missing pixels of an image")
    inp.add_argument("--input", required=True)
    inp.add_argument("--mask", required=True, help="PGM mask: 255 known, 0 missing")
    inp.add_argument("--out", required=True)
    inp.add_argument("--truth", help="ground truth image for the PSNR report")
    inp.add_argument("--lambda-max", dest="lambda_max", type=float,
                     help=f"initial data weight (default {settings.LAMBDA_MAX})")
    inp.add_argument("--gamma", type=float, help=f"TV weight (default {settings.TV_WEIGHT})")
    inp.add_argument("--mu-tv", dest="mu_tv", type=float, help=f"TV step (default {settings.TV_STEP})")
    inp.add_argument("--eps-tv", dest="eps_tv", type=float,
                     help=f"TV smoothing (default {settings.TV_EPSILON})")
    inp.add_argument("--reimpose", type=parse_bool, help="restore known pixels (default true)")
    inp.add_argument("--line-search", dest="line_search", type=parse_bool,
                     help="backtrack the inner step on the relaxed cost (default false)")
    _add_solver_flags(inp)
    inp.set_defaults(handler=cmd_inpaint)

    met = sub.add_parser("metrics", help="PSNR between two images")
    met.add_argument("--a", required=True)
    met.add_argument("--b", required=True)
    met.add_argument("--mask", help="restrict to the pixels this mask marks missing")
    met.set_defaults(handler=cmd_metrics)

    syn = sub.add_parser("synth", help="write a seeded synthetic cartoon+texture fixture")
    syn.add_argument("--seed", type=int, required=True)
    syn.add_argument("--size", type=int, default=64)
    syn.add_argument("--block", type=int, default=settings.BLOCK_SIZE)
    syn.add_argument("--amplitude", type=float, default=0.3)
    syn.add_argument("--missing", type=float, default=0.2, help="fraction of pixels removed")
    syn.add_argument("--out-image", dest="out_image", required=True)
    syn.add_argument("--out-mask", dest="out_mask", required=True)
    syn.add_argument("--out-truth", dest="out_truth")
    syn.set_defaults(handler=cmd_synth)
    return parser


def exit_code_for(error: Exception) -> Optional[int]:
    if isinstance(error, (ImageFormatError, OSError)):
        return EXIT_IO
    if isinstance(error, (DimensionError, ParameterError)):
        return EXIT_USAGE
    if isinstance(error, (SingularOperatorError, np.linalg.LinAlgError, FloatingPointError)):
        return EXIT_NUMERIC
    return None


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    logging.basicConfig(level=getattr(logging, settings.LOG_LEVEL))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        return args.handler(args)
    except Exception as e:
        code = exit_code_for(e)
        if code is None:
            raise
        logger.error(f"{args.command} failed: {str(e)}")
        print(f"error: {e}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
