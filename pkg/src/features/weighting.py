"""
Document-term weighting: raw counts and TF-IDF.
"""
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from src.models.corpus import Vocabulary
from src.numerics.matrices import as_csr


def term_counts(corpus: Sequence[Sequence[int]], vocabulary: Vocabulary) -> sp.csr_matrix:
    """
    Document x word raw count matrix.

    Args:
        corpus: Token-id sequences
        vocabulary: Vocabulary the ids refer to

    Returns:
        CSR matrix (|docs| x |vocab|); absent words are not stored
    """
    lengths = np.fromiter((len(doc) for doc in corpus), dtype=np.int64, count=len(corpus))
    rows = np.repeat(np.arange(len(corpus)), lengths)
    cols = np.fromiter((t for doc in corpus for t in doc), dtype=np.int64, count=int(lengths.sum()))
    if cols.size and cols.max() >= len(vocabulary):
        raise ValueError("Corpus contains token ids outside the vocabulary")
    counts = sp.coo_matrix(
        (np.ones(len(cols), dtype=np.float64), (rows, cols)),
        shape=(len(corpus), len(vocabulary)),
    )
    return as_csr(counts)


def inverse_document_frequency(vocabulary: Vocabulary, n_docs: int) -> np.ndarray:
    """ln(N / df) per word; unsmoothed since every retained word has df >= 1."""
    doc_frequency = np.asarray(vocabulary.doc_frequency, dtype=np.float64)
    if np.any(doc_frequency > n_docs):
        raise ValueError("Document frequency exceeds the number of documents")
    return np.log(n_docs / doc_frequency)


def tfidf(corpus: Sequence[Sequence[int]], vocabulary: Vocabulary) -> sp.csr_matrix:
    """
    TF-IDF matrix with raw term frequency and natural-log IDF.

    Entry (d, w) = count(w in d) * ln(N / df(w)). Words present in every
    document get idf 0 and are therefore not stored.

    Args:
        corpus: Token-id sequences
        vocabulary: Vocabulary built from this corpus

    Returns:
        CSR matrix (|docs| x |vocab|) with strictly positive stored values
    """
    counts = term_counts(corpus, vocabulary)
    idf = inverse_document_frequency(vocabulary, len(corpus))
    weighted = counts @ sp.diags(idf)
    return as_csr(weighted)
