"""
Synthetic topic corpora with disjoint per-class vocabularies.

Used for learnability checks and for producing a small runnable dataset.
"""
from pathlib import Path

import numpy as np
import pandas as pd

from src.models.corpus import RawDocument

# No 't' or 'w' so that generated words never look like a repeated unit
_LETTERS = "abcdefghijklmnopqrsuvxyz"


def _letters(n: int) -> str:
    """Bijective base-24 encoding of n >= 0 as letters."""
    out = ""
    n += 1
    while n > 0:
        n, rem = divmod(n - 1, len(_LETTERS))
        out = _LETTERS[rem] + out
    return out


def topic_word(class_id: int, word_id: int) -> str:
    """Alphabetic word owned by one topic, e.g. 'tawb'."""
    return f"t{_letters(class_id)}w{_letters(word_id)}"


def generate_topic_corpus(
    n_docs: int,
    n_classes: int,
    words_per_topic: int = 50,
    doc_length: int = 15,
    seed: int = 0,
) -> list[RawDocument]:
    """
    Generate documents whose words are drawn from their class's own vocabulary.

    Classes are assigned round-robin so class sizes differ by at most one.

    Args:
        n_docs: Number of documents
        n_classes: Number of classes (topics)
        words_per_topic: Size of each topic vocabulary
        doc_length: Tokens per document
        seed: Generator seed

    Returns:
        RawDocument list with categories "topic0", "topic1", ...
    """
    if n_classes < 2:
        raise ValueError("Need at least 2 classes")
    if n_docs < n_classes or words_per_topic < 2 or doc_length < 1:
        raise ValueError("Corpus parameters too small")

    rng = np.random.default_rng(seed)
    documents = []
    for i in range(n_docs):
        class_id = i % n_classes
        word_ids = rng.integers(0, words_per_topic, size=doc_length)
        content = " ".join(topic_word(class_id, int(w)) for w in word_ids)
        documents.append(RawDocument(id=f"doc{i:05d}", content=content, category=f"topic{class_id}"))
    return documents


def write_dataset_csv(path: Path, documents: list[RawDocument]) -> None:
    """Write documents as an `id,content,category` CSV."""
    frame = pd.DataFrame([doc.model_dump() for doc in documents], columns=["id", "content", "category"])
    frame.to_csv(path, index=False, lineterminator="\n")
