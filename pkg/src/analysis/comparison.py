"""
Side-by-side model comparison under a shared protocol.

同じシード・同じ分割で複数モデルを学習し、結果表（Markdown）を作る。
"""
import logging
from typing import Sequence

from src.analysis.experiment import ExperimentContext, ExperimentError, run_seeded
from src.constants import DEFAULT_SEEDS, MODEL_DISPLAY_NAMES, ModelName
from src.models.configs import ExperimentSpec
from src.models.reports import ExperimentReport

logger = logging.getLogger(__name__)


def compare_models(
    context: ExperimentContext,
    models: Sequence[ModelName],
    spec: ExperimentSpec,
    seeds: Sequence[int] = DEFAULT_SEEDS,
    jobs: int = 1,
) -> list[ExperimentReport]:
    """
    複数モデルを同じ条件で評価する。

    Args:
        context: Shared corpus and caches
        models: Models to run, in table order
        spec: Settings shared by every model (its model field is replaced)
        seeds: Run seeds
        jobs: Worker processes per experiment

    Returns:
        One report per model
    """
    if not models:
        raise ValueError("No models to compare")
    reports = []
    for model in models:
        logger.info(f"🔬 Comparing: {MODEL_DISPLAY_NAMES[model.value]}")
        try:
            reports.append(run_seeded(context, spec.with_updates(model=model), seeds, jobs))
        except ExperimentError as e:
            e.completed = list(reports)
            raise
    return reports


def render_results_table(reports: Sequence[ExperimentReport]) -> str:
    """
    結果表をMarkdownで生成する。

    Args:
        reports: Reports to tabulate

    Returns:
        Markdown table "Model | Accuracy (%) | F1 (%)" with mean ± std;
        the best mean of each column is bold
    """
    if not reports:
        return "_No results_\n"

    best_accuracy = max(report.accuracy.mean for report in reports)
    best_f1 = max(report.macro_f1.mean for report in reports)

    def cell(mean: float, std: float, best: float) -> str:
        text = f"{100 * mean:.2f} ± {100 * std:.2f}"
        return f"**{text}**" if mean == best else text

    md = "| Model | Accuracy (%) | F1 (%) |\n|-------|-------------:|-------:|\n"
    for report in reports:
        name = MODEL_DISPLAY_NAMES.get(report.model, report.model)
        md += (
            f"| {name} "
            f"| {cell(report.accuracy.mean, report.accuracy.std, best_accuracy)} "
            f"| {cell(report.macro_f1.mean, report.macro_f1.std, best_f1)} |\n"
        )
    return md
