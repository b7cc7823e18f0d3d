"""
Tests for class prediction.
"""
import numpy as np
import pytest
import scipy.sparse as sp

from src.classifiers.gcn import init_gcn_params
from src.classifiers.logreg import LogRegParams
from src.classifiers.prediction import argmax_classes, predict
from src.graph.adjacency import build_adjacency, normalize_adjacency
from src.graph.node_features import make_onehot_features


def test_argmax_ties_go_to_lowest_class():
    probabilities = np.array([[0.4, 0.4, 0.2], [0.1, 0.3, 0.6]])
    assert argmax_classes(probabilities).tolist() == [0, 2]


def test_logreg_prediction():
    params = LogRegParams(weights=np.array([[1.0, -1.0], [-1.0, 1.0]]), bias=np.zeros(2))
    assert predict(params, np.array([[2.0, 0.0], [0.0, 2.0]])).tolist() == [0, 1]
    assert predict(params, sp.csr_matrix(np.array([[0.0, 3.0]]))).tolist() == [1]


def test_gcn_prediction_covers_every_node():
    graph = normalize_adjacency(build_adjacency(sp.csr_matrix(np.array([[1.0, 0.5], [0.0, 2.0]])), None))
    features = make_onehot_features(graph)
    params = init_gcn_params(features.dimension, 3, 2, np.random.default_rng(0))
    predictions = predict(params, features, graph)
    assert predictions.shape == (4,)
    assert set(predictions.tolist()) <= {0, 1}


def test_gcn_prediction_needs_graph():
    params = init_gcn_params(4, 3, 2, np.random.default_rng(0))
    with pytest.raises(ValueError, match="graph"):
        predict(params, None)
