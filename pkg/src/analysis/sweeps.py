"""
Parameter sweeps: co-occurrence window size and labelled proportion.
"""
import logging
from typing import Sequence

from src.analysis.experiment import ExperimentContext, ExperimentError, run_seeded
from src.constants import DEFAULT_PROPORTION_GRID, DEFAULT_SEEDS, NO_PPMI_X, ModelName, Split, SweepKind
from src.corpus.splits import round_half_up
from src.models.configs import ExperimentSpec
from src.models.reports import SweepEntry, SweepResult

logger = logging.getLogger(__name__)


def _run_entry(context, spec, seeds, jobs, result: SweepResult):
    try:
        return run_seeded(context, spec, seeds, jobs)
    except ExperimentError as e:
        e.partial_sweep = result
        raise


def sweep_window_size(
    context: ExperimentContext,
    sizes: Sequence[int],
    base: ExperimentSpec,
    seeds: Sequence[int] = DEFAULT_SEEDS,
    include_no_ppmi: bool = True,
    jobs: int = 1,
) -> SweepResult:
    """
    Train the base model on graphs built with each window size.

    The graph without word-word edges is reported at x = 0.

    Args:
        context: Shared corpus and caches
        sizes: Window sizes (each >= 1)
        base: Experiment the sweep varies
        seeds: Run seeds
        include_no_ppmi: Also run the graph without PPMI edges
        jobs: Worker processes per experiment

    Returns:
        SweepResult with entries sorted by x

    Raises:
        ValueError: Empty grid, invalid size, or a non-graph model
    """
    if not base.model.is_graph_model:
        raise ValueError(f"Window sweeps need a graph model, got {base.model.value}")
    if not sizes and not include_no_ppmi:
        raise ValueError("The window grid is empty")
    if any(size < 1 for size in sizes):
        raise ValueError(f"Window sizes must be >= 1, got {list(sizes)}")

    variants: list[tuple[int, ExperimentSpec]] = []
    if include_no_ppmi:
        variants.append((NO_PPMI_X, base.with_updates(include_ppmi=False)))
    for size in sorted(set(sizes)):
        variants.append((size, base.with_updates(window_size=size, include_ppmi=True)))

    result = SweepResult(name=SweepKind.WINDOW.value, x_label="window_size")
    for x, spec in variants:
        label = "no PPMI" if not spec.include_ppmi else f"window {x}"
        logger.info(f"🪟 Window sweep: {label}")
        result.entries.append(SweepEntry(x=x, report=_run_entry(context, spec, seeds, jobs, result)))
    return result


def sweep_label_proportion(
    context: ExperimentContext,
    proportions: Sequence[float] = DEFAULT_PROPORTION_GRID,
    base: ExperimentSpec | None = None,
    models: Sequence[ModelName] | None = None,
    seeds: Sequence[int] = DEFAULT_SEEDS,
    jobs: int = 1,
) -> SweepResult:
    """
    Train every requested model at each labelled proportion.

    Args:
        context: Shared corpus and caches
        proportions: Fractions of the train split to label, each in (0, 1]
        base: Experiment the sweep varies (model is replaced per entry)
        models: Models to run (defaults to the base model)
        seeds: Run seeds
        jobs: Worker processes per experiment

    Returns:
        SweepResult with |proportions| x |models| entries

    Raises:
        ValueError: Empty grid, out-of-range proportion, or a proportion that
            labels no training document
    """
    base = base or ExperimentSpec()
    models = list(models) if models else [base.model]
    if not proportions:
        raise ValueError("The proportion grid is empty")

    n_train = len(context.split.indices(Split.TRAIN))
    for proportion in proportions:
        if not 0.0 < proportion <= 1.0:
            raise ValueError(f"Label proportion must be in (0, 1], got {proportion}")
        if round_half_up(proportion * n_train) == 0:
            raise ValueError(
                f"Label proportion {proportion} selects no document out of {n_train} train documents"
            )

    result = SweepResult(name=SweepKind.LABELS.value, x_label="label_proportion")
    for proportion in sorted(set(proportions)):
        for model in models:
            spec = base.with_updates(model=model, label_proportion=proportion)
            logger.info(f"🏷️  Label sweep: {model.value} at {proportion:.0%}")
            result.entries.append(SweepEntry(x=proportion, report=_run_entry(context, spec, seeds, jobs, result)))
    return result
