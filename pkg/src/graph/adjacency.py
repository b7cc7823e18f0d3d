"""
Heterogeneous document-word graph.

Node ids: documents occupy [0, n_docs), words [n_docs, n_docs + n_words).
Edges: doc-word = TF-IDF, word-word = PPMI (> 0), every node has a self-loop
of weight 1, and there are no doc-doc edges. Because the self-loops are part
of A already, normalisation uses D^-1/2 A D^-1/2 with no extra identity.
"""
import logging
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
import scipy.sparse as sp

from src.numerics.matrices import as_csr

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HeteroGraph:
    """Document-word graph with its (possibly normalised) adjacency."""

    n_docs: int
    n_words: int
    adjacency: sp.csr_matrix
    normalized: bool = False
    window_size: Optional[int] = None
    include_ppmi: bool = True

    @property
    def n_nodes(self) -> int:
        return self.n_docs + self.n_words

    def word_block(self) -> sp.csr_matrix:
        """Word-word block of the adjacency (diagonal included)."""
        return self.adjacency[self.n_docs:, self.n_docs:]

    def doc_block(self) -> sp.csr_matrix:
        """Doc-doc block of the adjacency (diagonal included)."""
        return self.adjacency[:self.n_docs, :self.n_docs]


def word_word_entries(graph: HeteroGraph) -> int:
    """Number of stored off-diagonal word-word entries."""
    block = graph.word_block().tocoo()
    return int(np.sum(block.row != block.col))


def build_adjacency(
    tfidf: sp.csr_matrix,
    ppmi: Optional[sp.csr_matrix],
    window_size: Optional[int] = None,
) -> HeteroGraph:
    """
    Assemble the unnormalised adjacency.

    Args:
        tfidf: |docs| x |vocab| TF-IDF matrix
        ppmi: |vocab| x |vocab| symmetric PPMI matrix, or None to omit
            word-word edges entirely
        window_size: Window the PPMI was computed with (recorded on the graph)

    Returns:
        HeteroGraph with normalized=False

    Raises:
        ValueError: On dimension mismatch or a non-symmetric PPMI matrix
    """
    n_docs, n_words = tfidf.shape
    doc_word = as_csr(tfidf)

    if ppmi is None:
        word_word = sp.csr_matrix((n_words, n_words), dtype=np.float64)
    else:
        if ppmi.shape != (n_words, n_words):
            raise ValueError(f"PPMI shape {ppmi.shape} does not match vocabulary size {n_words}")
        word_word = as_csr(ppmi)
        if (word_word - word_word.T).count_nonzero():
            raise ValueError("PPMI matrix must be symmetric")
        word_word = as_csr(word_word - sp.diags(word_word.diagonal()))

    n_nodes = n_docs + n_words
    off_diagonal = sp.bmat(
        [[sp.csr_matrix((n_docs, n_docs)), doc_word],
         [doc_word.T, word_word]],
        format="csr",
    )
    adjacency = as_csr(off_diagonal + sp.identity(n_nodes, format="csr"))

    logger.info(
        f"🕸️  Built graph: {n_docs} docs + {n_words} words, {adjacency.nnz} stored entries"
        + ("" if ppmi is not None else " (no PPMI)")
    )
    return HeteroGraph(
        n_docs=n_docs,
        n_words=n_words,
        adjacency=adjacency,
        normalized=False,
        window_size=window_size,
        include_ppmi=ppmi is not None,
    )


def normalize_adjacency(graph: HeteroGraph) -> HeteroGraph:
    """
    Symmetric degree normalisation D^-1/2 A D^-1/2 (sparsity pattern unchanged).

    Raises:
        ValueError: If the graph is already normalised or a degree is not positive
    """
    if graph.normalized:
        raise ValueError("Graph is already normalized")

    degrees = np.asarray(graph.adjacency.sum(axis=1)).ravel()
    if np.any(degrees <= 0):
        bad = np.flatnonzero(degrees <= 0)[:5].tolist()
        raise ValueError(f"Non-positive node degree at nodes {bad}")

    inv_sqrt = 1.0 / np.sqrt(degrees)
    scaling = sp.diags(inv_sqrt)
    normalized = (scaling @ graph.adjacency @ scaling).tocsr()
    normalized.sort_indices()
    return replace(graph, adjacency=normalized, normalized=True)
