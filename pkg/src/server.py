import logging
from typing import Any, Dict

import numpy as np
from mcp.server import Server, NotificationOptions
from mcp.server.models import InitializationOptions
import mcp.server.stdio
import mcp.types as types

from src.config.settings import settings
from src.config.solver import InpaintConfig, SolverConfig
from src.imaging.imgio import read_image, read_mask, write_image
from src.imaging.metrics import psnr
from src.operators.combined import CombinedOperator
from src.solvers.decompose import decompose, sparsity
from src.solvers.inpaint import inpaint
from src.transforms.block_dct import BlockDctDictionary
from src.transforms.wavelet import MultiscaleDictionary
from src.utils.report import format_psnr

# Configure logging
logging.basicConfig(level=getattr(logging, settings.LOG_LEVEL))
logger = logging.getLogger(__name__)

# Initialize server
app = Server(settings.MCP_SERVER_NAME)


_DICTIONARY_PROPERTIES = {
    "block": {
        "type": "integer",
        "description": "Side of the square DCT blocks of the texture dictionary",
        "default": settings.BLOCK_SIZE,
        "minimum": 1,
    },
    "levels": {
        "type": "integer",
        "description": "Decomposition depth of the cartoon wavelet dictionary",
        "default": settings.LEVELS,
        "minimum": 1,
    },
    "outer": {
        "type": "integer",
        "description": "Number of sigma levels",
        "default": settings.OUTER_ITERATIONS,
        "minimum": 1,
    },
    "inner": {
        "type": "integer",
        "description": "Gradient steps per sigma level",
        "default": settings.INNER_ITERATIONS,
        "minimum": 1,
    },
}


@app.list_tools()
async def list_tools() -> list[types.Tool]:
    """List available tools"""
    return [
        types.Tool(
            name="decompose_image",
            description="Split a grayscale image into texture (block DCT) and cartoon (wavelet) layers",
            inputSchema={
                "type": "object",
                "properties": {
                    "input_path": {
                        "type": "string",
                        "description": "PGM or PNG image to decompose",
                    },
                    "out_texture": {
                        "type": "string",
                        "description": "Where to write the texture layer",
                    },
                    "out_cartoon": {
                        "type": "string",
                        "description": "Where to write the cartoon layer",
                    },
                    **_DICTIONARY_PROPERTIES,
                },
                "required": ["input_path"],
            },
        ),
        types.Tool(
            name="inpaint_image",
            description="Fill the missing pixels of a grayscale image given a 0/255 mask",
            inputSchema={
                "type": "object",
                "properties": {
                    "input_path": {
                        "type": "string",
                        "description": "Observed image",
                    },
                    "mask_path": {
                        "type": "string",
                        "description": "Mask image: 255 known, 0 missing",
                    },
                    "out_path": {
                        "type": "string",
                        "description": "Where to write the reconstruction",
                    },
                    "truth_path": {
                        "type": "string",
                        "description": "Optional ground truth for a PSNR over the missing pixels",
                    },
                    "lambda_max": {
                        "type": "number",
                        "description": "Initial data-fidelity weight",
                        "default": settings.LAMBDA_MAX,
                    },
                    "gamma": {
                        "type": "number",
                        "description": "Total variation weight on the cartoon layer",
                        "default": settings.TV_WEIGHT,
                    },
                    **_DICTIONARY_PROPERTIES,
                },
                "required": ["input_path", "mask_path", "out_path"],
            },
        ),
        types.Tool(
            name="image_psnr",
            description="PSNR in dB between two images, optionally over the pixels a mask marks missing",
            inputSchema={
                "type": "object",
                "properties": {
                    "a_path": {"type": "string", "description": "First image"},
                    "b_path": {"type": "string", "description": "Second image"},
                    "mask_path": {"type": "string", "description": "Optional 0/255 mask"},
                },
                "required": ["a_path", "b_path"],
            },
        ),
    ]


@app.call_tool()
async def call_tool(name: str, arguments: dict) -> list[types.TextContent]:
    """Handle tool calls"""
    try:
        if name == "decompose_image":
            return await handle_decompose_image(arguments)
        elif name == "inpaint_image":
            return await handle_inpaint_image(arguments)
        elif name == "image_psnr":
            return await handle_image_psnr(arguments)
        else:
            raise ValueError(f"Unknown tool: {name}")
    except Exception as e:
        logger.error(f"Tool call failed: {str(e)}")
        return [types.TextContent(type="text", text=f"Error: {str(e)}")]


def _dictionaries(shape, arguments: Dict[str, Any]) -> CombinedOperator:
    return CombinedOperator(
        texture=BlockDctDictionary(shape, block=arguments.get("block", settings.BLOCK_SIZE)),
        cartoon=MultiscaleDictionary(
            shape, levels=arguments.get("levels", settings.LEVELS), wavelet=settings.WAVELET
        ),
    )


def _history_lines(history) -> list:
    lines = []
    for record in history:
        lam = "" if record["lambda_"] is None else f", lambda {record['lambda_']:.3g}"
        lines.append(
            f"   - n={record['n']}: sigma {record['sigma']:.4g}{lam}, "
            f"residual {record['residual']:.3e}, TV(cartoon) {record['tv_cartoon']:.3f}"
        )
    return lines


async def handle_decompose_image(arguments: dict) -> list[types.TextContent]:
    """Handle decompose_image tool call"""
    img = read_image(arguments["input_path"])
    comb = _dictionaries(img.shape, arguments)
    cfg = SolverConfig.from_settings(
        n_outer=arguments.get("outer", settings.OUTER_ITERATIONS),
        n_inner=arguments.get("inner", settings.INNER_ITERATIONS),
    )
    result = decompose(img, comb, cfg)

    written = []
    for key, layer in (("out_texture", result.c1), ("out_cartoon", result.c2)):
        if arguments.get(key):
            write_image(layer, arguments[key])
            written.append(arguments[key])

    response_parts = [
        f"Decomposed {img.shape[1]}x{img.shape[0]} image\n",
        f"**Dictionaries:** {comb.texture!r} + {comb.cartoon!r}",
        f"**Texture nonzeros:** {sparsity(result.s1)} of {result.s1.size}",
        f"**Cartoon nonzeros:** {sparsity(result.s2)} of {result.s2.size}",
        "**Iterations:**",
        *_history_lines(result.history),
    ]
    if written:
        response_parts.append(f"\nWrote: {', '.join(written)}")
    return [types.TextContent(type="text", text="\n".join(response_parts))]


async def handle_inpaint_image(arguments: dict) -> list[types.TextContent]:
    """Handle inpaint_image tool call"""
    img = read_image(arguments["input_path"])
    mask = read_mask(arguments["mask_path"])
    comb = _dictionaries(img.shape, arguments)
    cfg = InpaintConfig.from_settings(
        n_outer=arguments.get("outer", settings.OUTER_ITERATIONS),
        n_inner=arguments.get("inner", settings.INNER_ITERATIONS),
        lambda_max=arguments.get("lambda_max", settings.LAMBDA_MAX),
        gamma=arguments.get("gamma", settings.TV_WEIGHT),
    )
    c_hat, result = inpaint(img, mask, comb, cfg)
    write_image(c_hat, arguments["out_path"])

    missing = int(np.count_nonzero(~mask))
    response_parts = [
        f"Inpainted {missing} missing pixels of a {img.shape[1]}x{img.shape[0]} image\n",
        "**Iterations:**",
        *_history_lines(result.history),
    ]
    if arguments.get("truth_path") and missing:
        truth = read_image(arguments["truth_path"])
        quality = psnr(c_hat, truth, missing_of=mask)
        response_parts.append(f"\n**PSNR over missing pixels:** {format_psnr(quality)} dB")
    response_parts.append(f"\nWrote: {arguments['out_path']}")
    return [types.TextContent(type="text", text="\n".join(response_parts))]


async def handle_image_psnr(arguments: dict) -> list[types.TextContent]:
    """Handle image_psnr tool call"""
    a = read_image(arguments["a_path"])
    b = read_image(arguments["b_path"])
    mask = read_mask(arguments["mask_path"]) if arguments.get("mask_path") else None
    value = psnr(a, b, missing_of=mask)
    return [types.TextContent(type="text", text=f"PSNR: {format_psnr(value)} dB")]


async def main():
    """Main entry point"""
    logger.info(f"Starting {settings.MCP_SERVER_NAME} v{settings.MCP_SERVER_VERSION}")

    # Run the server
    async with mcp.server.stdio.stdio_server() as (read_stream, write_stream):
        await app.run(
            read_stream,
            write_stream,
            InitializationOptions(
                server_name=settings.MCP_SERVER_NAME,
                server_version=settings.MCP_SERVER_VERSION,
                capabilities=app.get_capabilities(
                    notification_options=NotificationOptions(),
                    experimental_capabilities={},
                ),
            ),
        )


if __name__ == "__main__":
    import asyncio
    asyncio.run(main())
