"""
Result files: metrics.json, summary.csv, plotdata_<name>.csv and results.md.
"""
import json
import logging
from pathlib import Path
from typing import Sequence

import pandas as pd

from src.analysis.comparison import render_results_table
from src.models.reports import ExperimentReport, SweepResult

logger = logging.getLogger(__name__)

METRICS_FILE = "metrics.json"
SUMMARY_FILE = "summary.csv"
RESULTS_FILE = "results.md"
SUMMARY_METRICS = ("accuracy", "macro_f1")


def summary_frame(reports: Sequence[ExperimentReport]) -> pd.DataFrame:
    """One row per (model, metric) with mean and std."""
    rows = [
        {
            "model": report.model,
            "metric": metric,
            "mean": getattr(report, metric).mean,
            "std": getattr(report, metric).std,
        }
        for report in reports
        for metric in SUMMARY_METRICS
    ]
    return pd.DataFrame(rows, columns=["model", "metric", "mean", "std"])


def plotdata_frame(sweep: SweepResult) -> pd.DataFrame:
    """Macro F1 mean/std per (x, model), sorted by x then model."""
    rows = [
        {
            "x": entry.x,
            "model": entry.report.model,
            "mean": entry.report.macro_f1.mean,
            "std": entry.report.macro_f1.std,
        }
        for entry in sweep.entries
    ]
    frame = pd.DataFrame(rows, columns=["x", "model", "mean", "std"])
    return frame.sort_values(["x", "model"], kind="mergesort").reset_index(drop=True)


def emit_report(
    reports: Sequence[ExperimentReport],
    output_dir: Path,
    sweeps: Sequence[SweepResult] = (),
) -> list[Path]:
    """
    Write every result file for a command.

    Args:
        reports: Top-level reports (train / compare)
        output_dir: Destination directory
        sweeps: Sweep results (each also gets a plotdata file)

    Returns:
        Paths written

    Raises:
        OSError: If a file cannot be written (the message names the path)
    """
    output_dir = Path(output_dir)
    written: list[Path] = []

    def write(path: Path, text: str) -> None:
        try:
            path.write_text(text, encoding="utf-8")
        except OSError as e:
            raise OSError(f"Cannot write {path}: {e}") from e
        written.append(path)

    try:
        output_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise OSError(f"Cannot create {output_dir}: {e}") from e

    payload = {
        "reports": [report.model_dump(mode="json") for report in reports],
        "sweeps": [sweep.model_dump(mode="json") for sweep in sweeps],
    }
    write(output_dir / METRICS_FILE, json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n")

    if reports:
        write(output_dir / SUMMARY_FILE, summary_frame(reports).to_csv(index=False, lineterminator="\n"))
        write(output_dir / RESULTS_FILE, render_results_table(reports))

    for sweep in sweeps:
        write(
            output_dir / f"plotdata_{sweep.name}.csv",
            plotdata_frame(sweep).to_csv(index=False, lineterminator="\n"),
        )

    logger.info(f"📝 Wrote {len(written)} result files to {output_dir}")
    return written


def load_reports(path: Path) -> tuple[list[ExperimentReport], list[SweepResult]]:
    """Parse a metrics.json written by emit_report."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Metrics file not found: {path}")
    payload = json.loads(path.read_text(encoding="utf-8"))
    reports = [ExperimentReport.model_validate(item) for item in payload.get("reports", [])]
    sweeps = [SweepResult.model_validate(item) for item in payload.get("sweeps", [])]
    return reports, sweeps
