"""
Tests for raw counts and TF-IDF weighting.
"""
import math

import numpy as np
import pytest

from src.features.weighting import inverse_document_frequency, term_counts, tfidf
from src.models.corpus import Vocabulary


@pytest.fixture
def small_corpus():
    documents = [[0, 0, 1], [1, 2]]
    vocabulary = Vocabulary(tokens=["mpira", "leo", "bunge"], frequency=[2, 2, 1], doc_frequency=[1, 2, 1])
    return documents, vocabulary


def test_term_counts(small_corpus):
    documents, vocabulary = small_corpus
    counts = term_counts(documents, vocabulary).toarray()
    assert counts.tolist() == [[2.0, 1.0, 0.0], [0.0, 1.0, 1.0]]


def test_idf(small_corpus):
    _, vocabulary = small_corpus
    assert np.allclose(inverse_document_frequency(vocabulary, 2), [math.log(2), 0.0, math.log(2)])


def test_tfidf_values_and_zero_idf_not_stored(small_corpus):
    documents, vocabulary = small_corpus
    matrix = tfidf(documents, vocabulary)
    assert matrix[0, 0] == pytest.approx(2 * math.log(2))
    assert matrix[1, 2] == pytest.approx(math.log(2))
    # "leo" is in every document
    assert matrix.nnz == 2
    assert np.all(matrix.data > 0)


def test_out_of_vocabulary_ids(small_corpus):
    _, vocabulary = small_corpus
    with pytest.raises(ValueError, match="outside the vocabulary"):
        term_counts([[0, 5]], vocabulary)


def test_single_document_has_all_zero_tfidf():
    vocabulary = Vocabulary(tokens=["mpira", "goli"], frequency=[1, 2], doc_frequency=[1, 1])
    matrix = tfidf([[0, 1, 1]], vocabulary)
    assert matrix.shape == (1, 2)
    assert matrix.nnz == 0
    assert not matrix.toarray().any()
