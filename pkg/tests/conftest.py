"""
Shared fixtures: small synthetic topic corpora and their splits.
"""
import pytest

from src.corpus.pipeline import preprocess_documents
from src.corpus.splits import split_corpus
from src.corpus.synthetic import generate_topic_corpus


def create_topic_corpus(n_docs=200, n_classes=2, words_per_topic=50, doc_length=15, seed=0):
    """テスト用のトピックコーパスを作成"""
    documents = generate_topic_corpus(n_docs, n_classes, words_per_topic, doc_length, seed)
    corpus, _ = preprocess_documents(documents, frozenset())
    return corpus


@pytest.fixture
def topic_corpus():
    """200 documents over 2 disjoint topics."""
    return create_topic_corpus()


@pytest.fixture
def topic_split(topic_corpus):
    return split_corpus(topic_corpus, seed=0)


@pytest.fixture
def small_corpus():
    """40 short documents over 2 topics, for fast end-to-end checks."""
    return create_topic_corpus(n_docs=40, words_per_topic=8, doc_length=6, seed=3)
