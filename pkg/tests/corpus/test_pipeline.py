"""
Tests for the preprocessing pipeline's vocabulary guarantees.
"""
import numpy as np
import pytest

from src.constants import MAX_TOKEN_LENGTH, MIN_TOKEN_LENGTH, SPECIAL_TOKENS
from src.corpus.pipeline import preprocess_documents
from src.corpus.stemmer import LookupStemmer
from src.models.corpus import RawDocument

STOPWORDS = {"na", "ya", "wa", "kwa", "ni"}

WORD_POOL = [
    "habari", "mpira", "siasa", "bungeni", "kana", "waziri", "timu", "goli",
    "na", "ya", "kwa", "ni", "a", "x", "2021", "covid19", "mpira!", "e-mail",
    "hahaha", "bumbum", "Ushindi", "MCHEZO", "rais.", "k" * 31, "m" * 30,
    "https://habari.co.tz", "@mwandishi", "#siasa", "café", "😀",
]


def create_documents(seed, n_docs=30):
    """語彙プールからランダムな文書を作成"""
    rng = np.random.default_rng(seed)
    documents = []
    for i in range(n_docs):
        words = rng.choice(WORD_POOL, size=int(rng.integers(1, 12)))
        documents.append(RawDocument(id=f"d{i}", content=" ".join(words), category=f"c{i % 3}"))
    return documents


def assert_clean_vocabulary(tokens, stopwords):
    for token in tokens:
        if token in SPECIAL_TOKENS:
            continue
        assert token not in stopwords, token
        assert MIN_TOKEN_LENGTH <= len(token) <= MAX_TOKEN_LENGTH, token
        assert token.isascii() and token.isalpha(), token


def test_stem_that_is_a_stopword_is_dropped():
    documents = [
        RawDocument(id="1", content="kana habari", category="a"),
        RawDocument(id="2", content="kana habari", category="b"),
    ]
    corpus, _ = preprocess_documents(documents, {"na"}, LookupStemmer({"kana": "na"}))
    assert corpus.vocabulary.tokens == ["habari"]
    assert corpus.token_documents() == [["habari"], ["habari"]]


@pytest.mark.parametrize("seed", range(5))
def test_vocabulary_holds_only_clean_tokens(seed):
    stemmer = LookupStemmer({
        "kana": "na",
        "waziri": "wazir",
        "timu": "t",
        "goli": "g0li",
        "siasa": "s" * 40,
    })
    corpus, _ = preprocess_documents(create_documents(seed), STOPWORDS, stemmer)
    assert_clean_vocabulary(corpus.vocabulary.tokens, STOPWORDS)
    assert "k" * 31 not in corpus.vocabulary.tokens


def test_stems_dropped_until_documents_are_empty():
    documents = [
        RawDocument(id="1", content="kana", category="a"),
        RawDocument(id="2", content="kana mpira", category="b"),
        RawDocument(id="3", content="habari", category="a"),
    ]
    corpus, stats = preprocess_documents(documents, {"na"}, LookupStemmer({"kana": "na"}))
    assert corpus.doc_ids == ["2", "3"]
    assert stats.dropped_empty == 1
