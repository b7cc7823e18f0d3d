"""
Evaluation result models.

These are the structures serialised into metrics.json; their keys are stable.
"""
from typing import Any

from pydantic import BaseModel, Field, model_validator


class Metrics(BaseModel):
    """Classification metrics for one evaluation."""

    accuracy: float = Field(..., ge=0, le=1)
    per_class_f1: list[float] = Field(default_factory=list)
    macro_f1: float = Field(..., ge=0, le=1)
    confusion: list[list[int]] = Field(default_factory=list, description="Rows are gold classes, columns predictions")

    @property
    def total(self) -> int:
        return sum(sum(row) for row in self.confusion)


class MetricSummary(BaseModel):
    """Mean and population standard deviation of a scalar metric over seeds."""

    mean: float
    std: float
    per_seed: list[float] = Field(default_factory=list)


class PerClassSummary(BaseModel):
    """Per-class F1 aggregated over seeds."""

    mean: list[float] = Field(default_factory=list)
    std: list[float] = Field(default_factory=list)
    per_seed: list[list[float]] = Field(default_factory=list)


class ExperimentReport(BaseModel):
    """Aggregated results of one model over several seeds."""

    model: str
    seeds: list[int] = Field(..., min_length=1)
    accuracy: MetricSummary
    macro_f1: MetricSummary
    per_class_f1: PerClassSummary
    per_seed_metrics: list[Metrics] = Field(default_factory=list)
    class_names: list[str] = Field(default_factory=list)
    runtime_s: float = 0.0
    peak_mem_bytes: int = 0
    timings: dict[str, float] = Field(default_factory=dict)
    config: dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _seed_alignment(self) -> "ExperimentReport":
        if self.per_seed_metrics and len(self.per_seed_metrics) != len(self.seeds):
            raise ValueError("per_seed_metrics must align with seeds")
        return self


class SweepEntry(BaseModel):
    """One point of a sweep."""

    x: float
    report: ExperimentReport


class SweepResult(BaseModel):
    """A named sweep over one experiment parameter."""

    name: str
    x_label: str
    entries: list[SweepEntry] = Field(default_factory=list)

    def models(self) -> list[str]:
        return sorted({entry.report.model for entry in self.entries})


class EpochRecord(BaseModel):
    """Training progress after one epoch."""

    epoch: int = Field(..., ge=0)
    train_loss: float = Field(..., description="Masked cross-entropy before this epoch's update")
    val_accuracy: float
    val_macro_f1: float


class TrainingHistory(BaseModel):
    """Per-epoch records and the epoch whose parameters were kept."""

    epochs: list[EpochRecord] = Field(default_factory=list)
    best_epoch: int = -1

    @property
    def train_losses(self) -> list[float]:
        return [record.train_loss for record in self.epochs]
