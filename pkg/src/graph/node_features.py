"""
Node input features for the GCN.

The one-hot variant is virtual: X = I is never materialised, the first layer
computes Â Θ0 directly. The t2v variant stacks document and word embedding
vectors into a dense N x dim matrix.
"""
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from src.constants import FeatureKind
from src.embeddings.table import EmbeddingTable
from src.graph.adjacency import HeteroGraph


@dataclass(frozen=True)
class NodeFeatures:
    """Input features for every graph node."""

    kind: FeatureKind
    n_nodes: int
    matrix: Optional[np.ndarray] = None

    @property
    def dimension(self) -> int:
        """Feature dimension F (N for the implicit identity)."""
        if self.kind == FeatureKind.ONEHOT:
            return self.n_nodes
        return int(self.matrix.shape[1])

    def materialize(self) -> np.ndarray:
        """Dense feature matrix; for one-hot this allocates N x N (tests only)."""
        if self.kind == FeatureKind.ONEHOT:
            return np.eye(self.n_nodes)
        return self.matrix


def make_onehot_features(graph: HeteroGraph) -> NodeFeatures:
    """Implicit N x N identity features."""
    return NodeFeatures(kind=FeatureKind.ONEHOT, n_nodes=graph.n_nodes)


def make_t2v_features(
    graph: HeteroGraph,
    word_vectors: EmbeddingTable,
    doc_vectors: EmbeddingTable,
    doc_keys: Sequence[str],
    word_keys: Sequence[str],
) -> NodeFeatures:
    """
    Dense embedding features in node order (documents, then words).

    Args:
        graph: Graph the features are for
        word_vectors: Word embedding table
        doc_vectors: Document embedding table
        doc_keys: Document id of each document node
        word_keys: Token of each word node

    Returns:
        NodeFeatures with an N x dim matrix

    Raises:
        ValueError: On dimension disagreement, key/graph size mismatch, or
            nodes without a vector (the message lists them)
    """
    if word_vectors.dimension != doc_vectors.dimension:
        raise ValueError(
            f"Word ({word_vectors.dimension}) and document ({doc_vectors.dimension}) "
            "embeddings must have the same dimension"
        )
    if len(doc_keys) != graph.n_docs or len(word_keys) != graph.n_words:
        raise ValueError("Node keys do not match the graph's document/word counts")

    missing = [f"doc:{key}" for key in doc_keys if key not in doc_vectors]
    missing += [key for key in word_keys if key not in word_vectors]
    if missing:
        preview = ", ".join(missing[:10])
        raise ValueError(f"{len(missing)} nodes have no embedding vector: {preview}")

    matrix = np.vstack([doc_vectors.matrix_for(doc_keys), word_vectors.matrix_for(word_keys)])
    return NodeFeatures(kind=FeatureKind.DENSE, n_nodes=graph.n_nodes, matrix=matrix)
