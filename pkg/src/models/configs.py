"""
Experiment configuration models.

Defaults reproduce the published hyperparameters, so an unconfigured run is
the reference configuration.
"""
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, Field, field_validator

from src.constants import (
    DEFAULT_LABEL_PROPORTION,
    DEFAULT_SEEDS,
    DEFAULT_WINDOW_SIZE,
    EMBEDDING_DIMENSION,
    LOGREG_DEFAULT_L2,
    LOGREG_MAX_ITER,
    LOGREG_TOLERANCE,
    ModelName,
)


class TrainConfig(BaseModel):
    """GCN training hyperparameters."""

    learning_rate: float = Field(default=0.02, gt=0, description="Adam learning rate")
    epochs: int = Field(default=100, ge=1, description="Maximum training epochs")
    dropout: float = Field(default=0.5, ge=0, lt=1, description="Dropout on the input of each GCN layer")
    hidden: int = Field(default=200, ge=1, description="Hidden layer width")
    seed: int = Field(default=0, ge=0, description="Run seed")
    selection_metric: str = Field(default="macro_f1", description="Validation metric used for model selection")

    @field_validator("selection_metric")
    @classmethod
    def _known_metric(cls, value: str) -> str:
        if value not in ("macro_f1", "accuracy"):
            raise ValueError(f"Unknown selection metric: {value}")
        return value


class EmbeddingTrainConfig(BaseModel):
    """Skip-gram / paragraph-vector training settings."""

    dimension: int = Field(default=EMBEDDING_DIMENSION, ge=1)
    epochs: int = Field(default=20, ge=1)
    window: int = Field(default=5, ge=1, description="Context window on each side of the center token")
    negatives: int = Field(default=5, ge=1)
    learning_rate: float = Field(default=0.025, gt=0, description="Initial step for skip-gram and PV-DBOW")
    dm_learning_rate: float = Field(default=0.05, gt=0, description="Initial step for PV-DM")
    min_learning_rate: float = Field(default=1e-4, gt=0, description="Floor of the linear decay")
    min_count: int = Field(default=1, ge=1)
    sampling_power: float = Field(default=0.75, gt=0)
    workers: int = Field(default=1, ge=1, description="More than one worker races on updates")


class LogRegConfig(BaseModel):
    """Multinomial logistic-regression solver settings."""

    l2: float = Field(default=LOGREG_DEFAULT_L2, ge=0)
    max_iter: int = Field(default=LOGREG_MAX_ITER, ge=1)
    tolerance: float = Field(default=LOGREG_TOLERANCE, gt=0)


class ExperimentSpec(BaseModel):
    """Everything that defines one model run, apart from the seed."""

    model: ModelName = Field(default=ModelName.TEXTGCN)
    window_size: int = Field(default=DEFAULT_WINDOW_SIZE, ge=1)
    include_ppmi: bool = Field(default=True, description="False omits word-word edges")
    label_proportion: float = Field(default=DEFAULT_LABEL_PROPORTION, gt=0, le=1)
    fixed_label_mask: bool = Field(default=False, description="Reuse the split-seed mask for every seed")
    split_seed: int = Field(default=0, ge=0)
    train: TrainConfig = Field(default_factory=TrainConfig)
    embedding: EmbeddingTrainConfig = Field(default_factory=EmbeddingTrainConfig)
    logreg: LogRegConfig = Field(default_factory=LogRegConfig)

    def with_updates(self, **changes) -> "ExperimentSpec":
        """Copy with top-level fields replaced."""
        return self.model_copy(update=changes, deep=True)


class RunConfig(BaseModel):
    """Command-line run configuration."""

    dataset: Optional[Path] = None
    workdir: Path = Path("./work")
    stemmer_table: Optional[Path] = None
    stopwords: Optional[Path] = None
    pretrained: Optional[Path] = None
    window_size: int = Field(default=DEFAULT_WINDOW_SIZE, ge=1)
    include_ppmi: bool = True
    label_proportion: float = Field(default=DEFAULT_LABEL_PROPORTION, gt=0, le=1)
    model: ModelName = ModelName.TEXTGCN
    seeds: list[int] = Field(default_factory=lambda: list(DEFAULT_SEEDS))
    split_seed: int = Field(default=0, ge=0)
    fixed_label_mask: bool = False
    jobs: int = Field(default=1, ge=1)
    train: TrainConfig = Field(default_factory=TrainConfig)
    embedding: EmbeddingTrainConfig = Field(default_factory=EmbeddingTrainConfig)
    logreg: LogRegConfig = Field(default_factory=LogRegConfig)

    @field_validator("seeds")
    @classmethod
    def _non_empty_seeds(cls, value: list[int]) -> list[int]:
        if not value:
            raise ValueError("At least one seed is required")
        if any(seed < 0 for seed in value):
            raise ValueError("Seeds must be non-negative")
        return value

    def experiment_spec(self) -> ExperimentSpec:
        """Project the run configuration onto a single-model experiment."""
        return ExperimentSpec(
            model=self.model,
            window_size=self.window_size,
            include_ppmi=self.include_ppmi,
            label_proportion=self.label_proportion,
            fixed_label_mask=self.fixed_label_mask,
            split_seed=self.split_seed,
            train=self.train,
            embedding=self.embedding,
            logreg=self.logreg,
        )
