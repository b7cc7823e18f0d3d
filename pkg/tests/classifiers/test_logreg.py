"""
Tests for multinomial logistic regression.
"""
import numpy as np
import pytest
import scipy.sparse as sp

from src.classifiers.logreg import (
    LogRegParams,
    largest_singular_value,
    logreg_loss_and_grads,
    logreg_probabilities,
    train_logreg,
)
from src.models.configs import LogRegConfig


def create_blobs(n_per_class=30, n_classes=3, dimension=4, seed=0):
    """クラスごとに離れた点群を作成"""
    rng = np.random.default_rng(seed)
    centers = np.eye(n_classes, dimension) * 6.0
    features = np.vstack([center + rng.normal(size=(n_per_class, dimension)) * 0.5 for center in centers])
    labels = np.repeat(np.arange(n_classes), n_per_class)
    return features, labels


def test_gradients_match_finite_differences():
    rng = np.random.default_rng(1)
    features = rng.normal(size=(6, 3))
    labels = np.array([0, 1, 2, 1, 0, 2])
    params = LogRegParams(weights=rng.normal(size=(3, 3)), bias=rng.normal(size=3))
    _, grads = logreg_loss_and_grads(params, features, labels, l2=0.1)

    eps = 1e-6
    for name in ("weights", "bias"):
        value = getattr(params, name)
        numeric = np.zeros_like(value)
        for index in np.ndindex(value.shape):
            shifted = [value.copy(), value.copy()]
            shifted[0][index] += eps
            shifted[1][index] -= eps
            losses = [
                logreg_loss_and_grads(
                    LogRegParams(**{**params.as_dict(), name: candidate}), features, labels, l2=0.1
                )[0]
                for candidate in shifted
            ]
            numeric[index] = (losses[0] - losses[1]) / (2 * eps)
        assert np.allclose(grads[name], numeric, atol=1e-6), name


def test_penalty_covers_weights_only():
    features = np.array([[1.0], [-1.0]])
    params = LogRegParams(weights=np.array([[2.0, -1.0]]), bias=np.array([3.0, -3.0]))
    plain, plain_grads = logreg_loss_and_grads(params, features, np.array([0, 1]), l2=0.0)
    penalised, grads = logreg_loss_and_grads(params, features, np.array([0, 1]), l2=0.5)
    assert penalised - plain == pytest.approx(0.25 * 5.0)
    assert np.allclose(grads["bias"], plain_grads["bias"])
    assert np.allclose(grads["weights"] - plain_grads["weights"], 0.5 * params.weights)


def test_largest_singular_value():
    features = np.diag([3.0, 1.0, 0.5])
    assert largest_singular_value(features, np.random.default_rng(0)) == pytest.approx(3.0, rel=1e-6)
    assert largest_singular_value(np.zeros((2, 2)), np.random.default_rng(0)) == 0.0


class TestTrainLogReg:
    """Gradient-descent training."""

    def test_separable_blobs(self):
        features, labels = create_blobs()
        params = train_logreg(features, labels, 3, LogRegConfig())
        predictions = np.argmax(logreg_probabilities(params, features), axis=1)
        assert np.array_equal(predictions, labels)
        assert params.l2 == LogRegConfig().l2

    def test_sparse_matches_dense(self):
        features, labels = create_blobs(n_per_class=10, seed=2)
        features[np.abs(features) < 0.5] = 0.0
        config = LogRegConfig(max_iter=200)
        dense = train_logreg(features, labels, 3, config)
        sparse = train_logreg(sp.csr_matrix(features), labels, 3, config)
        assert np.allclose(dense.weights, sparse.weights)
        assert np.allclose(dense.bias, sparse.bias)

    def test_deterministic(self):
        features, labels = create_blobs(seed=4)
        first = train_logreg(features, labels, 3, LogRegConfig(max_iter=50), seed=7)
        second = train_logreg(features, labels, 3, LogRegConfig(max_iter=50), seed=7)
        assert np.array_equal(first.weights, second.weights)

    def test_stronger_l2_shrinks_weights(self):
        features, labels = create_blobs(seed=5)
        weak = train_logreg(features, labels, 3, LogRegConfig(l2=1e-4))
        strong = train_logreg(features, labels, 3, LogRegConfig(l2=1.0))
        assert np.linalg.norm(strong.weights) < np.linalg.norm(weak.weights)

    def test_too_few_rows(self):
        with pytest.raises(ValueError, match="at least 3"):
            train_logreg(np.zeros((2, 2)), np.array([0, 1]), 3, LogRegConfig())

    def test_label_count_mismatch(self):
        with pytest.raises(ValueError, match="labels"):
            train_logreg(np.zeros((4, 2)), np.array([0, 1]), 2, LogRegConfig())

    def test_non_finite_features(self):
        features = np.ones((3, 2))
        features[1, 1] = np.nan
        with pytest.raises(ValueError, match="non-finite"):
            train_logreg(features, np.array([0, 1, 0]), 2, LogRegConfig())
