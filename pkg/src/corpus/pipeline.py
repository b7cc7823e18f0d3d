"""
End-to-end preprocessing: raw dataset rows -> ProcessedCorpus.

clean -> tokenize/filter -> special tokens -> stem (frequency > 1) ->
length filter -> vocabulary. Per-document work is a pure map and may run on
several worker processes; everything order-dependent runs afterwards in
document order, so the result does not depend on the worker count.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Iterable, Optional, Sequence

from pydantic import BaseModel

from src.constants import PLACEHOLDER_CONTENTS
from src.corpus.cleaning import clean_text, normalize_special_tokens, tokenize_and_filter
from src.corpus.stemmer import IdentityStemmer, Stemmer, stem_corpus
from src.corpus.vocabulary import build_vocabulary
from src.models.corpus import ProcessedCorpus, RawDocument

logger = logging.getLogger(__name__)


class PreprocessStats(BaseModel):
    """Counts reported by preprocess_documents."""

    input_documents: int = 0
    dropped_placeholder: int = 0
    dropped_empty: int = 0
    stemmer_failures: int = 0
    output_documents: int = 0
    vocabulary_size: int = 0


def prepare_tokens(content: str, stopwords: frozenset[str]) -> list[str]:
    """Clean, tokenize, filter and normalise one document."""
    return normalize_special_tokens(tokenize_and_filter(clean_text(content), stopwords))


def _map_documents(contents: list[str], stopwords: frozenset[str], workers: int) -> list[list[str]]:
    worker = partial(prepare_tokens, stopwords=stopwords)
    if workers <= 1 or len(contents) < 2:
        return [worker(content) for content in contents]
    chunksize = max(1, len(contents) // (workers * 4))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(worker, contents, chunksize=chunksize))


def is_placeholder(document: RawDocument) -> bool:
    """True for rows whose content carries no text."""
    stripped = document.content.strip()
    return not stripped or stripped in PLACEHOLDER_CONTENTS


def preprocess_documents(
    documents: Sequence[RawDocument],
    stopwords: Iterable[str],
    stemmer: Optional[Stemmer] = None,
    workers: int = 1,
) -> tuple[ProcessedCorpus, PreprocessStats]:
    """
    Run the full preprocessing pipeline.

    Args:
        documents: Dataset rows
        stopwords: Tokens to exclude
        stemmer: Stemmer for tokens seen more than once (identity if None)
        workers: Worker processes for the per-document map

    Returns:
        Tuple of (ProcessedCorpus, PreprocessStats)

    Raises:
        ValueError: If nothing survives preprocessing or fewer than 2 classes remain
    """
    stemmer = stemmer or IdentityStemmer()
    stats = PreprocessStats(input_documents=len(documents))

    kept = [doc for doc in documents if not is_placeholder(doc)]
    stats.dropped_placeholder = len(documents) - len(kept)
    if stats.dropped_placeholder:
        logger.info(f"🧹 Dropped {stats.dropped_placeholder} placeholder/empty rows")

    token_docs = _map_documents([doc.content for doc in kept], frozenset(stopwords), workers)
    token_docs, stats.stemmer_failures = stem_corpus(token_docs, stemmer, frozenset(stopwords))

    survivors = [(doc, tokens) for doc, tokens in zip(kept, token_docs) if tokens]
    stats.dropped_empty = len(kept) - len(survivors)
    if stats.dropped_empty:
        logger.warning(f"⚠️  Dropped {stats.dropped_empty} documents with no tokens left after preprocessing")
    if not survivors:
        raise ValueError("No documents left after preprocessing")

    class_names = sorted({doc.category for doc, _ in survivors})
    class_index = {name: i for i, name in enumerate(class_names)}

    vocabulary = build_vocabulary([tokens for _, tokens in survivors])
    corpus = ProcessedCorpus(
        doc_ids=[doc.id for doc, _ in survivors],
        documents=[[vocabulary.id_of(t) for t in tokens] for _, tokens in survivors],
        labels=[class_index[doc.category] for doc, _ in survivors],
        class_names=class_names,
        vocabulary=vocabulary,
    )

    stats.output_documents = corpus.n_docs
    stats.vocabulary_size = len(vocabulary)
    logger.info(
        f"✅ Preprocessed {corpus.n_docs} documents, {len(vocabulary)} word types, {len(class_names)} classes"
    )
    return corpus, stats
