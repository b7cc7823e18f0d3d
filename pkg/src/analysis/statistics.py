"""
Classification metrics and seed aggregation.

評価指標（accuracy / macro F1）の計算と、複数シードの平均・標準偏差の集計。
"""
from typing import Any, Sequence

import numpy as np
from sklearn.metrics import confusion_matrix

from src.models.reports import (
    ExperimentReport,
    MetricSummary,
    Metrics,
    PerClassSummary,
)


def compute_metrics(predictions: Sequence[int], golds: Sequence[int], n_classes: int) -> Metrics:
    """
    評価指標を計算する。

    Per-class F1 is 2tp / (2tp + fp + fn), taken as 0 when the denominator
    is 0; macro F1 is the unweighted mean over all n_classes classes.

    Args:
        predictions: Predicted class per sample
        golds: Gold class per sample
        n_classes: Number of classes C

    Returns:
        Metrics

    Raises:
        ValueError: Empty input, length mismatch, or labels outside [0, C)
    """
    predictions = np.asarray(predictions, dtype=np.int64)
    golds = np.asarray(golds, dtype=np.int64)
    if predictions.size == 0:
        raise ValueError("Cannot compute metrics on an empty evaluation set")
    if predictions.shape != golds.shape:
        raise ValueError(f"Length mismatch: {predictions.size} predictions, {golds.size} golds")
    for name, values in (("prediction", predictions), ("gold", golds)):
        if values.min() < 0 or values.max() >= n_classes:
            raise ValueError(f"A {name} label lies outside [0, {n_classes})")

    confusion = confusion_matrix(golds, predictions, labels=np.arange(n_classes))
    true_positive = np.diag(confusion).astype(np.float64)
    false_positive = confusion.sum(axis=0) - true_positive
    false_negative = confusion.sum(axis=1) - true_positive
    denominator = 2 * true_positive + false_positive + false_negative
    per_class = np.divide(
        2 * true_positive, denominator,
        out=np.zeros(n_classes), where=denominator > 0,
    )

    return Metrics(
        accuracy=float(true_positive.sum() / confusion.sum()),
        per_class_f1=per_class.tolist(),
        macro_f1=float(per_class.mean()),
        confusion=confusion.astype(int).tolist(),
    )


def aggregate(values: Sequence[float]) -> tuple[float, float]:
    """Mean and population standard deviation."""
    if len(values) == 0:
        raise ValueError("Cannot aggregate an empty sequence")
    array = np.asarray(values, dtype=np.float64)
    return float(array.mean()), float(array.std(ddof=0))


def summarize_runs(
    model: str,
    seeds: Sequence[int],
    per_seed_metrics: Sequence[Metrics],
    class_names: Sequence[str],
    config: dict[str, Any],
    runtime_s: float = 0.0,
    peak_mem_bytes: int = 0,
    timings: dict[str, float] | None = None,
) -> ExperimentReport:
    """
    シードごとの結果を集計してレポートを作る。

    Runs are sorted by seed before reduction, so the report does not depend
    on completion order.
    """
    order = sorted(range(len(seeds)), key=lambda k: seeds[k])
    seeds = [seeds[k] for k in order]
    per_seed_metrics = [per_seed_metrics[k] for k in order]

    accuracies = [m.accuracy for m in per_seed_metrics]
    macro_f1s = [m.macro_f1 for m in per_seed_metrics]
    per_class = np.asarray([m.per_class_f1 for m in per_seed_metrics], dtype=np.float64)

    acc_mean, acc_std = aggregate(accuracies)
    f1_mean, f1_std = aggregate(macro_f1s)

    return ExperimentReport(
        model=model,
        seeds=seeds,
        accuracy=MetricSummary(mean=acc_mean, std=acc_std, per_seed=accuracies),
        macro_f1=MetricSummary(mean=f1_mean, std=f1_std, per_seed=macro_f1s),
        per_class_f1=PerClassSummary(
            mean=per_class.mean(axis=0).tolist(),
            std=per_class.std(axis=0, ddof=0).tolist(),
            per_seed=per_class.tolist(),
        ),
        per_seed_metrics=list(per_seed_metrics),
        class_names=list(class_names),
        runtime_s=runtime_s,
        peak_mem_bytes=peak_mem_bytes,
        timings=dict(timings or {}),
        config=config,
    )
