"""
Application constants and enums.

Centralizes magic numbers, strings, and configuration values.
"""
from enum import Enum
from typing import Final

# ==============================================================================
# Corpus Preprocessing
# ==============================================================================

MAX_TOKEN_LENGTH: Final[int] = 30
MIN_TOKEN_LENGTH: Final[int] = 2

LAUGHTER_TOKEN: Final[str] = "laughter"
ONOMATOPOEIA_TOKEN: Final[str] = "onomatopoeia"
SPECIAL_TOKENS: Final[frozenset[str]] = frozenset({LAUGHTER_TOKEN, ONOMATOPOEIA_TOKEN})

# Samples that carry no text at all (e.g. the "['.']" row of the news dataset)
PLACEHOLDER_CONTENTS: Final[frozenset[str]] = frozenset({"['.']", "[.]", "."})

DATASET_COLUMNS: Final[tuple[str, ...]] = ("id", "content", "category")

# ==============================================================================
# Splits and Labels
# ==============================================================================

SPLIT_RATIOS: Final[tuple[int, int, int]] = (8, 1, 1)
MIN_DOCUMENTS_PER_CLASS: Final[int] = 3
MIN_DOCUMENTS_FOR_SPLIT: Final[int] = 10

DEFAULT_LABEL_PROPORTION: Final[float] = 0.20
DEFAULT_PROPORTION_GRID: Final[tuple[float, ...]] = (0.01, 0.05, 0.10, 0.20)
DEFAULT_SEEDS: Final[tuple[int, ...]] = (0, 1, 2, 3, 4)

# ==============================================================================
# Graph
# ==============================================================================

DEFAULT_WINDOW_SIZE: Final[int] = 30
DEFAULT_WINDOW_GRID: Final[tuple[int, ...]] = (5, 10, 20, 30)
NO_PPMI_X: Final[int] = 0  # x-coordinate of the "no word-word edges" point in window sweeps
NODE_ORDER: Final[str] = "docs_then_words"

# ==============================================================================
# Numerics and Training
# ==============================================================================

PROBABILITY_FLOOR: Final[float] = 1e-12
EMBEDDING_DIMENSION: Final[int] = 300
PRINT_PRECISION: Final[str] = ".17g"

ADAM_BETA1: Final[float] = 0.9
ADAM_BETA2: Final[float] = 0.999
ADAM_EPSILON: Final[float] = 1e-8

LOGREG_TOLERANCE: Final[float] = 1e-6
LOGREG_MAX_ITER: Final[int] = 1000
LOGREG_DEFAULT_L2: Final[float] = 1e-4

# ==============================================================================
# Enums
# ==============================================================================

class Split(str, Enum):
    """Document split tags."""
    TRAIN = "train"
    VALIDATION = "validation"
    TEST = "test"


class ModelName(str, Enum):
    """Models that can be trained and evaluated."""
    TEXTGCN = "textgcn"
    TEXTGCN_T2V = "textgcn-t2v"
    TFIDF = "tfidf"
    COUNTS = "counts"
    AVG_EMBED = "avg-embed"
    PVDBOW = "pvdbow"
    PVDM = "pvdm"

    @property
    def is_graph_model(self) -> bool:
        return self in (ModelName.TEXTGCN, ModelName.TEXTGCN_T2V)


class FeatureKind(str, Enum):
    """Node feature representations."""
    ONEHOT = "one-hot-identity"
    DENSE = "dense"


class EmbeddingKind(str, Enum):
    """Embedding tables produced by the trainers."""
    SKIPGRAM = "skipgram"
    PVDBOW = "pvdbow"
    PVDM = "pvdm"


class SweepKind(str, Enum):
    """Experiment sweeps."""
    WINDOW = "window"
    LABELS = "labels"


# Display names for result tables
MODEL_DISPLAY_NAMES: Final[dict[str, str]] = {
    ModelName.TFIDF.value: "TF-IDF",
    ModelName.COUNTS.value: "Counts",
    ModelName.AVG_EMBED.value: "fastText",
    ModelName.PVDBOW.value: "PV-DBOW",
    ModelName.PVDM.value: "PV-DM",
    ModelName.TEXTGCN.value: "Text GCN",
    ModelName.TEXTGCN_T2V.value: "Text GCN-t2v",
}
