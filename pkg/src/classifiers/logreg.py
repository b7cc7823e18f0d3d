"""
Multinomial logistic regression trained by full-batch gradient descent.

Used by every document-feature baseline (TF-IDF, counts, averaged word
embeddings, paragraph vectors). Features may be dense arrays or scipy sparse
matrices.
"""
import logging
from dataclasses import dataclass
from typing import Union

import numpy as np
import scipy.sparse as sp

from src.constants import PROBABILITY_FLOOR
from src.models.configs import LogRegConfig
from src.numerics.matrices import softmax_rows
from src.numerics.random_source import RandomSource

logger = logging.getLogger(__name__)

FeatureMatrix = Union[np.ndarray, sp.spmatrix]

POWER_ITERATIONS = 50


@dataclass
class LogRegParams:
    """Weights (F x C), bias (C,) and the L2 strength they were trained with."""

    weights: np.ndarray
    bias: np.ndarray
    l2: float = 0.0

    @property
    def n_classes(self) -> int:
        return int(self.weights.shape[1])

    def as_dict(self) -> dict[str, np.ndarray]:
        return {"weights": self.weights, "bias": self.bias}


def _check_features(features: FeatureMatrix) -> None:
    values = features.data if sp.issparse(features) else np.asarray(features)
    if values.size and not np.all(np.isfinite(values)):
        raise ValueError("Logistic regression features contain non-finite values")


def logreg_probabilities(params: LogRegParams, features: FeatureMatrix) -> np.ndarray:
    """Class probabilities per row."""
    logits = np.asarray(features @ params.weights) + params.bias
    return softmax_rows(logits)


def logreg_loss_and_grads(
    params: LogRegParams,
    features: FeatureMatrix,
    labels: np.ndarray,
    l2: float,
) -> tuple[float, dict[str, np.ndarray]]:
    """
    Mean cross-entropy plus (l2 / 2) * ||W||^2, and its gradients.

    The bias is not regularised.

    Returns:
        (loss, {"weights": dL/dW, "bias": dL/db})
    """
    labels = np.asarray(labels, dtype=np.int64)
    n = labels.size
    probabilities = logreg_probabilities(params, features)
    picked = np.maximum(probabilities[np.arange(n), labels], PROBABILITY_FLOOR)
    loss = float(-np.log(picked).mean() + 0.5 * l2 * np.sum(params.weights ** 2))

    residual = probabilities
    residual[np.arange(n), labels] -= 1.0
    residual /= n
    grad_weights = np.asarray(features.T @ residual) + l2 * params.weights
    grad_bias = residual.sum(axis=0)
    return loss, {"weights": grad_weights, "bias": grad_bias}


def largest_singular_value(features: FeatureMatrix, rng: np.random.Generator) -> float:
    """Power-iteration estimate of the largest singular value of X."""
    vector = rng.standard_normal(features.shape[1])
    vector /= np.linalg.norm(vector)
    estimate = 0.0
    for _ in range(POWER_ITERATIONS):
        image = np.asarray(features.T @ np.asarray(features @ vector)).ravel()
        norm = np.linalg.norm(image)
        if norm == 0.0:
            return 0.0
        estimate = float(np.sqrt(norm))
        vector = image / norm
    return estimate


def train_logreg(
    features: FeatureMatrix,
    labels: np.ndarray,
    n_classes: int,
    config: LogRegConfig,
    seed: int = 0,
) -> LogRegParams:
    """
    Fit softmax regression from zero initialisation.

    Step size is 0.5 / L with L = (sigma_max(X)^2 + n) / (2n) + l2, a bound on
    the curvature of the loss in (W, b). Stops when the loss changes by less
    than config.tolerance or after config.max_iter iterations.

    Args:
        features: N_train x F matrix
        labels: Class per row
        n_classes: Number of classes C
        config: Solver settings
        seed: Seeds the power-iteration start vector

    Returns:
        LogRegParams

    Raises:
        ValueError: Non-finite features, or fewer rows than classes
    """
    labels = np.asarray(labels, dtype=np.int64)
    n_rows, n_features = features.shape
    if labels.size != n_rows:
        raise ValueError(f"{n_rows} feature rows but {labels.size} labels")
    if n_rows < n_classes:
        raise ValueError(f"Need at least {n_classes} training rows, got {n_rows}")
    _check_features(features)

    sigma = largest_singular_value(features, RandomSource(seed).substream("power-iteration"))
    curvature = (sigma ** 2 + n_rows) / (2.0 * n_rows) + config.l2
    step = 0.5 / curvature

    params = LogRegParams(
        weights=np.zeros((n_features, n_classes)),
        bias=np.zeros(n_classes),
        l2=config.l2,
    )
    previous, grads = logreg_loss_and_grads(params, features, labels, config.l2)
    iterations = 0
    for iterations in range(1, config.max_iter + 1):
        params = LogRegParams(
            weights=params.weights - step * grads["weights"],
            bias=params.bias - step * grads["bias"],
            l2=config.l2,
        )
        loss, grads = logreg_loss_and_grads(params, features, labels, config.l2)
        if abs(previous - loss) < config.tolerance:
            previous = loss
            break
        previous = loss

    logger.debug(f"Logistic regression: {iterations} iterations, loss {previous:.6f}")
    return params
