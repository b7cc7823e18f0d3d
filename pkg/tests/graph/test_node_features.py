"""
Tests for GCN node features.
"""
import numpy as np
import pytest
import scipy.sparse as sp

from src.constants import FeatureKind
from src.embeddings.table import EmbeddingTable
from src.graph.adjacency import build_adjacency
from src.graph.node_features import make_onehot_features, make_t2v_features


@pytest.fixture
def graph():
    tfidf = sp.csr_matrix(np.array([[1.0, 0.0], [0.0, 1.0]]))
    return build_adjacency(tfidf, None)


def test_onehot_is_virtual(graph):
    features = make_onehot_features(graph)
    assert features.kind == FeatureKind.ONEHOT
    assert features.matrix is None
    assert features.dimension == 4
    assert np.array_equal(features.materialize(), np.eye(4))


def test_t2v_rows_in_node_order(graph):
    words = EmbeddingTable(kind="word", keys=["goli", "bunge"], vectors=[[1.0, 0.0], [0.0, 1.0]])
    docs = EmbeddingTable(kind="document", keys=["b", "a"], vectors=[[5.0, 5.0], [3.0, 3.0]])
    features = make_t2v_features(graph, words, docs, doc_keys=["a", "b"], word_keys=["bunge", "goli"])
    assert features.kind == FeatureKind.DENSE
    assert features.dimension == 2
    assert features.matrix.tolist() == [[3.0, 3.0], [5.0, 5.0], [0.0, 1.0], [1.0, 0.0]]


def test_t2v_lists_missing_nodes(graph):
    words = EmbeddingTable(kind="word", keys=["goli"], vectors=[[1.0, 0.0]])
    docs = EmbeddingTable(kind="document", keys=["a"], vectors=[[1.0, 1.0]])
    with pytest.raises(ValueError, match="doc:b, bunge"):
        make_t2v_features(graph, words, docs, doc_keys=["a", "b"], word_keys=["goli", "bunge"])


def test_t2v_dimension_mismatch(graph):
    words = EmbeddingTable(kind="word", keys=["goli", "bunge"], vectors=np.zeros((2, 3)))
    docs = EmbeddingTable(kind="document", keys=["a", "b"], vectors=np.zeros((2, 2)))
    with pytest.raises(ValueError, match="same dimension"):
        make_t2v_features(graph, words, docs, doc_keys=["a", "b"], word_keys=["goli", "bunge"])


def test_t2v_key_count_mismatch(graph):
    words = EmbeddingTable(kind="word", keys=["goli"], vectors=np.zeros((1, 2)))
    docs = EmbeddingTable(kind="document", keys=["a", "b"], vectors=np.zeros((2, 2)))
    with pytest.raises(ValueError, match="do not match"):
        make_t2v_features(graph, words, docs, doc_keys=["a", "b"], word_keys=["goli"])
