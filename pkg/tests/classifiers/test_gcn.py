"""
Tests for the two-layer GCN: forward pass, hand-derived gradients and training.
"""
import math
import tracemalloc

import numpy as np
import pytest
import scipy.sparse as sp

from src.classifiers.gcn import (
    GcnParams,
    gcn_forward,
    gcn_loss_and_grads,
    init_gcn_params,
    masked_cross_entropy,
    train_gcn,
)
from src.constants import FeatureKind, Split
from src.features.cooccurrence import count_windows, ppmi_matrix
from src.features.weighting import tfidf
from src.graph.adjacency import build_adjacency, normalize_adjacency
from src.graph.node_features import NodeFeatures, make_onehot_features
from src.models.configs import TrainConfig


def build_corpus_graph(corpus, window_size=20):
    """コーパスから正規化済みグラフを作成"""
    weights = tfidf(corpus.documents, corpus.vocabulary)
    stats = count_windows(corpus.documents, window_size, len(corpus.vocabulary))
    return normalize_adjacency(build_adjacency(weights, ppmi_matrix(stats), window_size))


@pytest.fixture
def tiny_graph():
    """3 documents, 4 words."""
    weights = sp.csr_matrix(np.array([
        [0.4, 1.1, 0.0, 0.0],
        [0.0, 0.7, 0.9, 0.0],
        [0.0, 0.0, 0.3, 1.4],
    ]))
    ppmi = sp.csr_matrix(np.array([
        [0.0, 0.5, 0.0, 0.0],
        [0.5, 0.0, 0.2, 0.0],
        [0.0, 0.2, 0.0, 0.8],
        [0.0, 0.0, 0.8, 0.0],
    ]))
    return normalize_adjacency(build_adjacency(weights, ppmi))


@pytest.fixture
def tiny_labels():
    return np.array([0, 1, 1]), np.array([True, False, True])


def numeric_gradient(loss_fn, params, eps=1e-6):
    grads = {}
    for name, value in params.as_dict().items():
        grad = np.zeros_like(value)
        for index in np.ndindex(value.shape):
            plus, minus = params.copy(), params.copy()
            getattr(plus, name)[index] += eps
            getattr(minus, name)[index] -= eps
            grad[index] = (loss_fn(plus) - loss_fn(minus)) / (2 * eps)
        grads[name] = grad
    return grads


def relative_error(analytic, numeric):
    scale = max(np.linalg.norm(analytic) + np.linalg.norm(numeric), 1e-12)
    return np.linalg.norm(analytic - numeric) / scale


def assert_gradients_match(graph, features, labels, mask, dropout_rate=0.0, params=None):
    if params is None:
        params = init_gcn_params(features.dimension, 3, 2, np.random.default_rng(5))
    training = dropout_rate > 0.0

    def loss_fn(candidate):
        # A fresh generator per call repeats the same dropout masks
        return gcn_loss_and_grads(
            graph, features, candidate, labels, mask,
            dropout_rng=np.random.default_rng(0), training=training, dropout_rate=dropout_rate,
        )[0]

    _, analytic = gcn_loss_and_grads(
        graph, features, params, labels, mask,
        dropout_rng=np.random.default_rng(0), training=training, dropout_rate=dropout_rate,
    )
    numeric = numeric_gradient(loss_fn, params)
    for name in ("theta0", "theta1"):
        assert relative_error(analytic[name], numeric[name]) <= 1e-5, name


class TestForward:
    """Forward pass and loss."""

    def test_probabilities_are_distributions(self, tiny_graph):
        features = make_onehot_features(tiny_graph)
        params = init_gcn_params(features.dimension, 4, 3, np.random.default_rng(0))
        probabilities, _ = gcn_forward(tiny_graph, features, params)
        assert probabilities.shape == (7, 3)
        assert np.allclose(probabilities.sum(axis=1), 1.0)
        assert np.all(probabilities >= 0)

    def test_onehot_matches_materialised_identity(self, tiny_graph):
        onehot = make_onehot_features(tiny_graph)
        dense = NodeFeatures(kind=FeatureKind.DENSE, n_nodes=7, matrix=onehot.materialize())
        params = init_gcn_params(7, 4, 2, np.random.default_rng(1))
        implicit, _ = gcn_forward(tiny_graph, onehot, params)
        explicit, _ = gcn_forward(tiny_graph, dense, params)
        assert np.allclose(implicit, explicit)

    def test_needs_normalised_graph(self):
        raw = build_adjacency(sp.csr_matrix(np.array([[1.0, 2.0]])), None)
        features = make_onehot_features(raw)
        params = init_gcn_params(3, 2, 2, np.random.default_rng(0))
        with pytest.raises(ValueError, match="normalized"):
            gcn_forward(raw, features, params)

    def test_dropout_needs_generator(self, tiny_graph):
        features = make_onehot_features(tiny_graph)
        params = init_gcn_params(7, 2, 2, np.random.default_rng(0))
        with pytest.raises(ValueError, match="generator"):
            gcn_forward(tiny_graph, features, params, training=True, dropout_rate=0.5)

    def test_feature_mismatch(self, tiny_graph):
        features = make_onehot_features(tiny_graph)
        params = init_gcn_params(5, 2, 2, np.random.default_rng(0))
        with pytest.raises(ValueError, match="mismatch"):
            gcn_forward(tiny_graph, features, params)

    def test_cross_entropy_clamps_zero_probability(self):
        probabilities = np.array([[1.0, 0.0], [0.5, 0.5]])
        loss = masked_cross_entropy(probabilities, np.array([1, 0]), np.array([True, False]))
        assert loss == pytest.approx(-math.log(1e-12))

    def test_cross_entropy_ignores_unmasked_rows(self):
        probabilities = np.array([[0.25, 0.75], [0.9, 0.1]])
        loss = masked_cross_entropy(probabilities, np.array([1, 1]), np.array([True, False]))
        assert loss == pytest.approx(-math.log(0.75))

    def test_cross_entropy_of_uniform_distribution(self):
        probabilities = np.full((4, 6), 1.0 / 6.0)
        loss = masked_cross_entropy(probabilities, np.array([0, 5, 2, 3]), np.array([True, True, False, True]))
        assert loss == pytest.approx(math.log(6), abs=1e-12)

    def test_empty_mask(self):
        with pytest.raises(ValueError, match="no labelled"):
            masked_cross_entropy(np.full((2, 2), 0.5), np.array([0, 1]), np.array([False, False]))

    def test_params_shape_check(self):
        with pytest.raises(ValueError, match="Inconsistent"):
            GcnParams(theta0=np.zeros((4, 3)), theta1=np.zeros((2, 2)))


class TestGradients:
    """Analytic gradients against central finite differences."""

    def test_onehot(self, tiny_graph, tiny_labels):
        assert_gradients_match(tiny_graph, make_onehot_features(tiny_graph), *tiny_labels)

    def test_dense(self, tiny_graph, tiny_labels):
        matrix = np.random.default_rng(3).normal(size=(7, 5))
        features = NodeFeatures(kind=FeatureKind.DENSE, n_nodes=7, matrix=matrix)
        assert_gradients_match(tiny_graph, features, *tiny_labels)

    def test_onehot_with_dropout(self, tiny_graph, tiny_labels):
        assert_gradients_match(tiny_graph, make_onehot_features(tiny_graph), *tiny_labels, dropout_rate=0.3)

    def test_dense_with_dropout(self, tiny_graph, tiny_labels):
        matrix = np.random.default_rng(4).normal(size=(7, 5))
        features = NodeFeatures(kind=FeatureKind.DENSE, n_nodes=7, matrix=matrix)
        assert_gradients_match(tiny_graph, features, *tiny_labels, dropout_rate=0.3)

    def test_random_parameterisations(self, tiny_graph, tiny_labels):
        rng = np.random.default_rng(11)
        features = make_onehot_features(tiny_graph)
        for _ in range(20):
            params = GcnParams(theta0=rng.normal(size=(7, 3)), theta1=rng.normal(size=(3, 2)))
            assert_gradients_match(tiny_graph, features, *tiny_labels, params=params)

    def test_unmasked_labels_do_not_change_loss_or_gradients(self, tiny_graph, tiny_labels):
        labels, mask = tiny_labels
        features = make_onehot_features(tiny_graph)
        params = init_gcn_params(7, 3, 2, np.random.default_rng(2))
        loss, grads = gcn_loss_and_grads(tiny_graph, features, params, labels, mask)
        flipped = labels.copy()
        flipped[~mask] = 1 - flipped[~mask]
        other_loss, other_grads = gcn_loss_and_grads(tiny_graph, features, params, flipped, mask)
        assert loss == other_loss
        assert all(np.array_equal(grads[name], other_grads[name]) for name in grads)

    def test_backward_reuses_symmetric_adjacency(self, tiny_graph, tiny_labels, monkeypatch):
        features = make_onehot_features(tiny_graph)
        params = init_gcn_params(7, 3, 2, np.random.default_rng(6))
        _, expected = gcn_loss_and_grads(tiny_graph, features, params, *tiny_labels)

        def no_transpose(self, *args, **kwargs):
            raise AssertionError("adjacency transposed during a training step")

        monkeypatch.setattr(type(tiny_graph.adjacency), "transpose", no_transpose)
        _, grads = gcn_loss_and_grads(tiny_graph, features, params, *tiny_labels)
        for name in ("theta0", "theta1"):
            assert np.array_equal(grads[name], expected[name])

    def test_onehot_gradient_memory(self):
        """One-hot features never allocate an N x N matrix."""
        n_docs, n_words = 500, 1500
        weights = sp.random(n_docs, n_words, density=0.01, format="csr", random_state=0)
        weights.data += 0.1
        graph = normalize_adjacency(build_adjacency(weights, None))
        features = make_onehot_features(graph)
        params = init_gcn_params(features.dimension, 16, 2, np.random.default_rng(0))
        labels = np.arange(n_docs) % 2
        mask = np.zeros(n_docs, dtype=bool)
        mask[:50] = True

        tracemalloc.start()
        try:
            gcn_loss_and_grads(graph, features, params, labels, mask)
            _, peak = tracemalloc.get_traced_memory()
        finally:
            tracemalloc.stop()
        n = graph.n_nodes
        assert peak < n * n * 8 / 4


class TestTraining:
    """Full-batch training with model selection."""

    @pytest.fixture
    def setup(self, topic_corpus, topic_split):
        graph = build_corpus_graph(topic_corpus)
        return dict(
            graph=graph,
            features=make_onehot_features(graph),
            labels=topic_corpus.label_array(),
            labelled_mask=topic_split.labelled(),
            validation_mask=topic_split.mask(Split.VALIDATION),
            n_classes=topic_corpus.n_classes,
        )

    @pytest.fixture
    def config(self):
        return TrainConfig(epochs=15, hidden=16, seed=0)

    def test_loss_decreases_and_history_recorded(self, setup, config):
        params, history = train_gcn(config=config, **setup)
        losses = history.train_losses
        assert len(losses) == 15
        assert losses[-1] < losses[0]
        assert 0 <= history.best_epoch < 15
        assert params.theta0.shape == (setup["graph"].n_nodes, 16)
        assert params.n_classes == 2

    def test_first_epoch_loss_near_uniform(self, setup, config):
        _, history = train_gcn(config=config.model_copy(update={"dropout": 0.0}), **setup)
        assert history.train_losses[0] == pytest.approx(math.log(setup["n_classes"]), abs=0.05)

    def test_loss_never_increases_without_dropout(self, setup):
        config = TrainConfig(epochs=10, hidden=16, dropout=0.0, seed=0)
        _, history = train_gcn(config=config, **setup)
        losses = history.train_losses
        assert len(losses) == 10
        for epoch in range(1, 10):
            assert losses[epoch] <= losses[epoch - 1] + 1e-12, epoch

    def test_deterministic_per_seed(self, setup, config):
        first, _ = train_gcn(config=config, **setup)
        second, _ = train_gcn(config=config, **setup)
        assert np.array_equal(first.theta0, second.theta0)
        assert np.array_equal(first.theta1, second.theta1)
        other, _ = train_gcn(config=config.model_copy(update={"seed": 1}), **setup)
        assert not np.array_equal(first.theta1, other.theta1)

    def test_unseen_labels_do_not_matter(self, setup, config):
        """Labels outside the labelled and validation masks never reach training."""
        hidden = ~(setup["labelled_mask"] | setup["validation_mask"])
        scrambled = setup["labels"].copy()
        scrambled[hidden] = 1 - scrambled[hidden]

        first, _ = train_gcn(config=config, **setup)
        second, _ = train_gcn(config=config, **{**setup, "labels": scrambled})
        assert np.array_equal(first.theta0, second.theta0)
        assert np.array_equal(first.theta1, second.theta1)

    def test_separate_validation_labels(self, setup, config):
        hidden_labels = setup["labels"].copy()
        hidden_labels[setup["validation_mask"]] = 0
        _, expected = train_gcn(config=config, **setup)
        _, history = train_gcn(config=config, **{**setup, "labels": hidden_labels},
                               validation_labels=setup["labels"])
        assert history.train_losses == expected.train_losses
        assert history.best_epoch == expected.best_epoch

    def test_overlapping_masks(self, setup, config):
        with pytest.raises(ValueError, match="disjoint"):
            train_gcn(config=config, **{**setup, "validation_mask": setup["labelled_mask"]})

    def test_empty_validation(self, setup, config):
        empty = np.zeros_like(setup["validation_mask"])
        with pytest.raises(ValueError, match="Validation"):
            train_gcn(config=config, **{**setup, "validation_mask": empty})
