"""
Two-layer graph convolutional network with hand-derived gradients.

    Z1 = ReLU(Â · drop(X) · Θ0)
    P  = softmax_rows(Â · drop(Z1) · Θ1)

The loss is cross-entropy over the labelled document nodes only. Labels and
masks cover the leading document block of the node ordering.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.analysis.statistics import compute_metrics
from src.classifiers.adam import AdamState, adam_step
from src.constants import PROBABILITY_FLOOR, FeatureKind
from src.graph.adjacency import HeteroGraph
from src.graph.node_features import NodeFeatures
from src.models.configs import TrainConfig
from src.models.reports import EpochRecord, TrainingHistory
from src.numerics.matrices import draw_dropout_mask, glorot_init, softmax_rows, spmm
from src.numerics.random_source import RandomSource

logger = logging.getLogger(__name__)


@dataclass
class GcnParams:
    """Layer weights Θ0 (F x H) and Θ1 (H x C)."""

    theta0: np.ndarray
    theta1: np.ndarray

    def __post_init__(self):
        if self.theta0.ndim != 2 or self.theta1.ndim != 2 or self.theta0.shape[1] != self.theta1.shape[0]:
            raise ValueError(
                f"Inconsistent GCN shapes: theta0 {self.theta0.shape}, theta1 {self.theta1.shape}"
            )

    @property
    def n_classes(self) -> int:
        return int(self.theta1.shape[1])

    def as_dict(self) -> dict[str, np.ndarray]:
        return {"theta0": self.theta0, "theta1": self.theta1}

    @classmethod
    def from_dict(cls, values: dict[str, np.ndarray]) -> "GcnParams":
        return cls(theta0=values["theta0"], theta1=values["theta1"])

    def copy(self) -> "GcnParams":
        return GcnParams(theta0=self.theta0.copy(), theta1=self.theta1.copy())


@dataclass
class ForwardCache:
    """Intermediates of a forward pass needed by gcn_backward."""

    graph: HeteroGraph
    features: NodeFeatures
    params: GcnParams
    input_mask: Optional[np.ndarray]   # (N,) for one-hot, (N, F) for dense, None without dropout
    hidden_mask: Optional[np.ndarray]  # (N, H) or None
    pre_activation: np.ndarray         # Â · drop(X) · Θ0
    hidden: np.ndarray                 # ReLU(pre_activation)
    probabilities: np.ndarray


def init_gcn_params(n_features: int, hidden: int, n_classes: int, rng: np.random.Generator) -> GcnParams:
    """Glorot-uniform initialisation of both layers."""
    return GcnParams(
        theta0=glorot_init(n_features, hidden, rng),
        theta1=glorot_init(hidden, n_classes, rng),
    )


def _first_layer_input(features: NodeFeatures, theta0: np.ndarray, input_mask: Optional[np.ndarray]) -> np.ndarray:
    """drop(X) · Θ0 without materialising the one-hot identity."""
    if features.kind == FeatureKind.ONEHOT:
        # drop(I) = diag(mask), so drop(I) · Θ0 scales the rows of Θ0
        return theta0 if input_mask is None else input_mask[:, np.newaxis] * theta0
    inputs = features.matrix if input_mask is None else features.matrix * input_mask
    return inputs @ theta0


def gcn_forward(
    graph: HeteroGraph,
    features: NodeFeatures,
    params: GcnParams,
    dropout_rng: Optional[np.random.Generator] = None,
    training: bool = False,
    dropout_rate: float = 0.0,
) -> tuple[np.ndarray, ForwardCache]:
    """
    Run the network over all nodes.

    Args:
        graph: Graph with normalised adjacency Â
        features: Node features X
        params: Layer weights
        dropout_rng: Generator for dropout masks (required when training with dropout)
        training: Apply dropout to the input of both layers
        dropout_rate: Drop probability

    Returns:
        (N x C class probabilities, cache for gcn_backward)

    Raises:
        ValueError: Unnormalised adjacency or inconsistent shapes
    """
    if not graph.normalized:
        raise ValueError("gcn_forward needs a normalized adjacency")
    if features.n_nodes != graph.n_nodes or params.theta0.shape[0] != features.dimension:
        raise ValueError(
            f"Feature/parameter mismatch: {features.n_nodes} nodes x {features.dimension} features, "
            f"theta0 {params.theta0.shape}, graph has {graph.n_nodes} nodes"
        )

    use_dropout = training and dropout_rate > 0.0
    if use_dropout and dropout_rng is None:
        raise ValueError("Training with dropout needs a dropout generator")

    input_mask = None
    if use_dropout:
        mask_shape = (graph.n_nodes,) if features.kind == FeatureKind.ONEHOT else features.matrix.shape
        input_mask = draw_dropout_mask(mask_shape, dropout_rate, dropout_rng)

    adjacency = graph.adjacency
    pre_activation = spmm(adjacency, _first_layer_input(features, params.theta0, input_mask))
    hidden = np.maximum(pre_activation, 0.0)

    hidden_mask = draw_dropout_mask(hidden.shape, dropout_rate, dropout_rng) if use_dropout else None
    dropped_hidden = hidden if hidden_mask is None else hidden * hidden_mask
    logits = spmm(adjacency, dropped_hidden @ params.theta1)
    probabilities = softmax_rows(logits)

    cache = ForwardCache(
        graph=graph,
        features=features,
        params=params,
        input_mask=input_mask,
        hidden_mask=hidden_mask,
        pre_activation=pre_activation,
        hidden=hidden,
        probabilities=probabilities,
    )
    return probabilities, cache


def _masked_rows(labels: np.ndarray, mask: np.ndarray, n_rows: int) -> np.ndarray:
    labels = np.asarray(labels)
    mask = np.asarray(mask, dtype=bool)
    if labels.shape != mask.shape:
        raise ValueError(f"Labels {labels.shape} and mask {mask.shape} differ in shape")
    if len(mask) > n_rows:
        raise ValueError(f"Mask covers {len(mask)} rows, probabilities have {n_rows}")
    rows = np.flatnonzero(mask)
    if rows.size == 0:
        raise ValueError("Mask selects no labelled nodes")
    return rows


def masked_cross_entropy(probabilities: np.ndarray, labels: np.ndarray, mask: np.ndarray) -> float:
    """
    Mean negative log-probability of the gold class over masked rows.

    Probabilities are clamped below at 1e-12 before the log.

    Raises:
        ValueError: Empty mask or label/mask shape mismatch
    """
    rows = _masked_rows(labels, mask, probabilities.shape[0])
    gold = np.asarray(labels, dtype=np.int64)[rows]
    picked = np.maximum(probabilities[rows, gold], PROBABILITY_FLOOR)
    return float(-np.log(picked).mean())


def gcn_backward(cache: ForwardCache, labels: np.ndarray, mask: np.ndarray) -> dict[str, np.ndarray]:
    """
    Gradients of the masked cross-entropy with respect to Θ0 and Θ1.

    Dropout masks from the forward pass are reused.

    Returns:
        {"theta0": dL/dΘ0, "theta1": dL/dΘ1}
    """
    probabilities = cache.probabilities
    rows = _masked_rows(labels, mask, probabilities.shape[0])
    gold = np.asarray(labels, dtype=np.int64)[rows]
    if gold.max() >= probabilities.shape[1]:
        raise ValueError("A label exceeds the number of output classes")

    # Â is symmetric, so it is its own transpose
    adjacency = cache.graph.adjacency

    # dL/dlogits: (P - Y) / |mask| on masked rows, zero elsewhere
    grad_logits = np.zeros_like(probabilities)
    grad_logits[rows] = probabilities[rows]
    grad_logits[rows, gold] -= 1.0
    grad_logits /= rows.size

    grad_projected = spmm(adjacency, grad_logits)
    dropped_hidden = cache.hidden if cache.hidden_mask is None else cache.hidden * cache.hidden_mask
    grad_theta1 = dropped_hidden.T @ grad_projected

    grad_hidden = grad_projected @ cache.params.theta1.T
    if cache.hidden_mask is not None:
        grad_hidden *= cache.hidden_mask
    grad_pre = grad_hidden * (cache.pre_activation > 0)

    grad_input_product = spmm(adjacency, grad_pre)
    features = cache.features
    if features.kind == FeatureKind.ONEHOT:
        grad_theta0 = grad_input_product if cache.input_mask is None else cache.input_mask[:, np.newaxis] * grad_input_product
    else:
        inputs = features.matrix if cache.input_mask is None else features.matrix * cache.input_mask
        grad_theta0 = inputs.T @ grad_input_product

    return {"theta0": grad_theta0, "theta1": grad_theta1}


def gcn_loss_and_grads(
    graph: HeteroGraph,
    features: NodeFeatures,
    params: GcnParams,
    labels: np.ndarray,
    mask: np.ndarray,
    dropout_rng: Optional[np.random.Generator] = None,
    training: bool = False,
    dropout_rate: float = 0.0,
) -> tuple[float, dict[str, np.ndarray]]:
    """Forward, loss and backward in one call."""
    probabilities, cache = gcn_forward(graph, features, params, dropout_rng, training, dropout_rate)
    loss = masked_cross_entropy(probabilities, labels, mask)
    return loss, gcn_backward(cache, labels, mask)


def train_gcn(
    graph: HeteroGraph,
    features: NodeFeatures,
    labels: np.ndarray,
    labelled_mask: np.ndarray,
    validation_mask: np.ndarray,
    config: TrainConfig,
    n_classes: Optional[int] = None,
    validation_labels: Optional[np.ndarray] = None,
) -> tuple[GcnParams, TrainingHistory]:
    """
    Full-batch training with validation-based model selection.

    One Adam update per epoch over the whole graph. After each update the
    validation split is scored with dropout off; the parameters of the epoch
    with the best validation metric are returned (earliest epoch on ties).

    Args:
        graph: Normalised graph
        features: Node features
        labels: Class per document node (length n_docs)
        labelled_mask: Documents whose labels drive the loss
        validation_mask: Documents used for model selection
        config: Hyperparameters and seed
        n_classes: Number of classes (defaults to max label + 1)
        validation_labels: Labels used for model selection (defaults to labels)

    Returns:
        (best parameters, history)
    """
    labels = np.asarray(labels, dtype=np.int64)
    labelled_mask = np.asarray(labelled_mask, dtype=bool)
    validation_mask = np.asarray(validation_mask, dtype=bool)
    validation_labels = labels if validation_labels is None else np.asarray(validation_labels, dtype=np.int64)
    if np.any(labelled_mask & validation_mask):
        raise ValueError("Labelled and validation masks must be disjoint")
    if not validation_mask.any():
        raise ValueError("Validation mask selects no documents")
    n_classes = int(labels.max()) + 1 if n_classes is None else n_classes

    source = RandomSource(config.seed)
    params = init_gcn_params(features.dimension, config.hidden, n_classes, source.substream("model"))
    dropout_rng = source.substream("dropout")
    state = AdamState(learning_rate=config.learning_rate)

    validation_rows = np.flatnonzero(validation_mask)
    history = TrainingHistory()
    best_params = params.copy()
    best_score = -np.inf

    for epoch in range(config.epochs):
        loss, grads = gcn_loss_and_grads(
            graph, features, params, labels, labelled_mask,
            dropout_rng=dropout_rng, training=True, dropout_rate=config.dropout,
        )
        params = GcnParams.from_dict(adam_step(params.as_dict(), grads, state))

        probabilities, _ = gcn_forward(graph, features, params, training=False)
        predictions = np.argmax(probabilities[validation_rows], axis=1)
        metrics = compute_metrics(predictions, validation_labels[validation_rows], n_classes)
        history.epochs.append(EpochRecord(
            epoch=epoch,
            train_loss=loss,
            val_accuracy=metrics.accuracy,
            val_macro_f1=metrics.macro_f1,
        ))

        score = metrics.macro_f1 if config.selection_metric == "macro_f1" else metrics.accuracy
        if score > best_score:
            best_score = score
            best_params = params.copy()
            history.best_epoch = epoch

        logger.debug(
            f"epoch {epoch:3d}: loss {loss:.4f}, val acc {metrics.accuracy:.4f}, "
            f"val macro F1 {metrics.macro_f1:.4f}"
        )

    logger.info(
        f"✅ GCN trained: best epoch {history.best_epoch} "
        f"(val {config.selection_metric} {best_score:.4f})"
    )
    return best_params, history


def gcn_probabilities(graph: HeteroGraph, features: NodeFeatures, params: GcnParams) -> np.ndarray:
    """Inference-mode class probabilities for every node."""
    probabilities, _ = gcn_forward(graph, features, params, training=False)
    return probabilities
