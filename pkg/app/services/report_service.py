from pathlib import Path
from typing import Literal, Optional, Union
import logging

import numpy as np
import pandas as pd
from rich.table import Table

from app.models.bench_models import BenchReport, GridMoments

logger = logging.getLogger(__name__)

ReportFormat = Literal["csv", "json", "md"]

REPORT_COLUMNS = ["algorithm", "params", "max_mean_error", "max_sd_error", "wall_time_s"]
MOMENT_COLUMNS = ["x", "mean", "sd", "exact_mean", "exact_sd"]

# table labels for the five comparison settings
_DISPLAY_NAMES = {"dls": "DLS", "leekim": "LK", "lee": "Lee", "pc": "PC", "as": "New"}


def report_frame(report: BenchReport) -> pd.DataFrame:
    return pd.DataFrame([row.model_dump(include=set(REPORT_COLUMNS)) for row in report.rows], columns=REPORT_COLUMNS)


def report_to_csv(report: BenchReport) -> str:
    return report_frame(report).to_csv(index=False, float_format="%.6f")


def report_to_json(report: BenchReport) -> str:
    return report.model_dump_json(indent=2)


def _cell(value: Optional[float]) -> str:
    return "failed" if value is None else f"{value:.4f}"


def report_to_markdown(report: BenchReport) -> str:
    lines = [
        "| Algorithm | Parameters | max. mean error | max. s.d. error | Time (s) |",
        "|---|---|---|---|---|",
    ]
    for row in report.rows:
        name = _DISPLAY_NAMES.get(row.algorithm, row.algorithm)
        lines.append(
            f"| {name} | {row.params} | {_cell(row.max_mean_error)} | {_cell(row.max_sd_error)} | {row.wall_time_s:.2f} |"
        )
    lines.append("")
    lines.append(f"c = {report.c:g}, mass = {report.mass:g}, {report.paths} paths, seed {report.master_seed}")
    return "\n".join(lines) + "\n"


def render_report(report: BenchReport, fmt: ReportFormat) -> str:
    writers = {"csv": report_to_csv, "json": report_to_json, "md": report_to_markdown}
    if fmt not in writers:
        raise ValueError(f"unknown report format {fmt!r}")
    return writers[fmt](report)


def report_table(report: BenchReport) -> Table:
    """Console rendering of a report."""
    table = Table(title=f"Error metrics over {report.paths} paths (seed {report.master_seed})")
    for header in ("Algorithm", "Parameters", "max. mean error", "max. s.d. error", "Time (s)"):
        table.add_column(header, justify="left" if header in ("Algorithm", "Parameters") else "right")
    for row in report.rows:
        table.add_row(
            _DISPLAY_NAMES.get(row.algorithm, row.algorithm),
            row.params,
            _cell(row.max_mean_error),
            _cell(row.max_sd_error) if row.ok else (row.error or "failed"),
            f"{row.wall_time_s:.2f}",
        )
    return table


def moments_frame(moments: GridMoments, exact: GridMoments) -> pd.DataFrame:
    return pd.DataFrame(
        np.column_stack([moments.grid, moments.mean, moments.sd, exact.mean, exact.sd]),
        columns=MOMENT_COLUMNS,
    )


def write_text(text: str, out: Optional[Union[str, Path]]) -> None:
    if out is None:
        return
    Path(out).write_text(text, encoding="utf-8")
    logger.info(f"wrote {out}")
