"""
Per-iteration run reports.

File layout: one '#' line echoing the configuration, one header line, one
comma-separated row per outer iteration, and a trailing '# psnr_missing=...'
line when ground truth was supplied. Timings are logged, not written, so the
same inputs always give the same file.
"""

import csv
import io
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from src.models.types import IterationRecord, RunReport

logger = logging.getLogger(__name__)

COLUMNS = ("n", "sigma", "lambda", "residual", "f0_texture", "f0_cartoon", "tv_cartoon")


def _format(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_psnr(value: float) -> str:
    return "inf" if math.isinf(value) else f"{value:.4f}"


def render_report(report: RunReport) -> str:
    buffer = io.StringIO()
    config = " ".join(f"{key}={_format(value)}" for key, value in report["config"].items())
    buffer.write(f"# {config}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(COLUMNS)
    for record in report["records"]:
        writer.writerow([
            _format(record["n"]),
            _format(record["sigma"]),
            _format(record["lambda_"]),
            _format(record["residual"]),
            _format(record["f0_texture"]),
            _format(record["f0_cartoon"]),
            _format(record["tv_cartoon"]),
        ])
    if report.get("psnr_missing") is not None:
        buffer.write(f"# psnr_missing={format_psnr(report['psnr_missing'])}\n")
    return buffer.getvalue()


def write_report(path: Union[str, Path], report: RunReport) -> None:
    Path(path).write_text(render_report(report))
    for name, seconds in report.get("timings", {}).items():
        logger.info(f"{name}: {seconds:.3f}s")


def read_report(path: Union[str, Path]) -> Tuple[Dict[str, str], List[Dict[str, str]], Optional[str]]:
    """Parse a report file into (config, rows, psnr_missing text)"""
    lines = Path(path).read_text().splitlines()
    config: Dict[str, str] = {}
    psnr_text = None
    body = []
    for line in lines:
        if line.startswith("# psnr_missing="):
            psnr_text = line.split("=", 1)[1]
        elif line.startswith("#"):
            config = dict(item.split("=", 1) for item in line[1:].split())
        else:
            body.append(line)
    rows = list(csv.DictReader(body))
    return config, rows, psnr_text


def make_report(config: Dict[str, Any], records: List[IterationRecord],
                timings: Optional[Dict[str, float]] = None,
                psnr_missing: Optional[float] = None) -> RunReport:
    return RunReport(
        config=config,
        records=records,
        timings=timings or {},
        psnr_missing=psnr_missing,
    )
