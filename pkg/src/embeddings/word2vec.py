"""
Skip-gram word vectors with negative sampling.

Updates are applied per block of center positions: all (context, center)
pairs of the block share one loss/gradient evaluation, then the gradients are
scattered into the tables. Single-worker training is deterministic per seed.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

import numpy as np

from src.embeddings.sampler import LinearDecay, NegativeSampler, pair_loss_and_grads
from src.embeddings.table import EmbeddingTable
from src.models.configs import EmbeddingTrainConfig
from src.models.corpus import ProcessedCorpus
from src.numerics.random_source import RandomSource

logger = logging.getLogger(__name__)

# (document index, token ids, block start, block stop, learning rate, sampler) -> loss
BlockStep = Callable[[int, np.ndarray, int, int, float, NegativeSampler], float]
# (document length, block start, block stop) -> training pairs in the block
PairCount = Callable[[int, int, int], int]


def init_input_vectors(rows: int, dimension: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform in [-0.5/dim, 0.5/dim), as word2vec initialises its input layer."""
    return (rng.random((rows, dimension)) - 0.5) / dimension


def window_offsets(window: int) -> np.ndarray:
    """Relative context positions -window..-1, 1..window."""
    return np.concatenate([np.arange(-window, 0), np.arange(1, window + 1)])


def one_pair_per_position(length: int, start: int, stop: int) -> int:
    return stop - start


def context_pair_counter(window: int) -> PairCount:
    """Count (center, context) pairs whose context lies inside the document."""
    def count(length: int, start: int, stop: int) -> int:
        positions = np.arange(start, stop)
        return int(np.sum(np.minimum(positions, window) + np.minimum(length - 1 - positions, window)))
    return count


def trainable_documents(corpus: ProcessedCorpus, min_count: int) -> tuple[list[np.ndarray], np.ndarray]:
    """
    Token arrays with rare tokens removed, plus the sampler counts.

    Returns:
        (documents, counts) where counts are zero for removed tokens
    """
    counts = np.asarray(corpus.vocabulary.frequency, dtype=np.int64)
    keep = counts >= min_count
    if int(keep.sum()) < 2:
        raise ValueError(
            f"Embedding training needs at least 2 vocabulary entries with frequency >= {min_count}"
        )
    documents = []
    for doc in corpus.documents:
        tokens = np.asarray(doc, dtype=np.int64)
        documents.append(tokens[keep[tokens]] if tokens.size else tokens)
    return documents, np.where(keep, counts, 0)


def run_epochs(
    documents: Sequence[np.ndarray],
    step: BlockStep,
    config: EmbeddingTrainConfig,
    initial_rate: float,
    counts: np.ndarray,
    source: RandomSource,
    label: str,
    pair_count: PairCount = one_pair_per_position,
) -> None:
    """
    Drive block updates over every document for config.epochs epochs.

    Block size is 2 * window positions. The learning rate decays linearly over
    the scheduled training pairs, as counted by `pair_count`. With more than
    one worker, documents are sharded over threads that update the shared
    tables without locks.
    """
    block = 2 * config.window
    total_tokens = int(sum(len(doc) for doc in documents))
    if total_tokens == 0:
        raise ValueError("Cannot train embeddings on a corpus without tokens")
    total_pairs = sum(pair_count(len(doc), 0, len(doc)) for doc in documents)
    schedule = LinearDecay(initial_rate, config.min_learning_rate, max(1, config.epochs * total_pairs))

    def run_shard(shard: Sequence[int], sampler: NegativeSampler, position_scale: int) -> float:
        loss = 0.0
        processed = 0
        for epoch in range(config.epochs):
            epoch_loss = 0.0
            for doc_index in shard:
                tokens = documents[doc_index]
                for start in range(0, len(tokens), block):
                    stop = min(start + block, len(tokens))
                    rate = schedule(processed * position_scale)
                    epoch_loss += step(doc_index, tokens, start, stop, rate, sampler)
                    processed += pair_count(len(tokens), start, stop)
            logger.debug(f"{label} epoch {epoch + 1}/{config.epochs}: loss {epoch_loss:.4f}")
            loss = epoch_loss
        return loss

    if config.workers <= 1:
        sampler = NegativeSampler(counts, source.substream("sampler"), config.sampling_power)
        final_loss = run_shard(range(len(documents)), sampler, 1)
    else:
        shards = [range(k, len(documents), config.workers) for k in range(config.workers)]
        samplers = [
            NegativeSampler(counts, source.substream(f"sampler-{k}"), config.sampling_power)
            for k in range(config.workers)
        ]
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            final_loss = sum(pool.map(run_shard, shards, samplers, [config.workers] * config.workers))

    logger.info(f"✅ {label}: {config.epochs} epochs, final epoch loss {final_loss:.4f}")


def train_skipgram(corpus: ProcessedCorpus, config: EmbeddingTrainConfig, seed: int) -> EmbeddingTable:
    """
    Train skip-gram word vectors.

    Each context token within `window` positions of a center predicts the
    center through the negative-sampling logistic loss.

    Args:
        corpus: Processed corpus
        config: Training settings
        seed: Run seed

    Returns:
        Word table of input-side vectors, keyed by token

    Raises:
        ValueError: If fewer than 2 tokens are trainable
    """
    documents, counts = trainable_documents(corpus, config.min_count)
    source = RandomSource(seed)
    n_words = len(counts)
    w_in = init_input_vectors(n_words, config.dimension, source.substream("word-init"))
    w_out = np.zeros((n_words, config.dimension))
    offsets = window_offsets(config.window)

    def step(doc_index, tokens, start, stop, rate, sampler):
        positions = np.arange(start, stop)
        context = positions[:, np.newaxis] + offsets
        valid = (context >= 0) & (context < len(tokens))
        if not valid.any():
            return 0.0
        centers = np.broadcast_to(tokens[positions][:, np.newaxis], context.shape)[valid]
        contexts = tokens[context[valid]]

        negatives = sampler.draw((len(centers), config.negatives))
        loss, g_in, g_pos, g_negs = pair_loss_and_grads(
            w_in[contexts], w_out[centers], w_out[negatives], negatives != centers[:, np.newaxis]
        )
        np.add.at(w_in, contexts, -rate * g_in)
        np.add.at(w_out, centers, -rate * g_pos)
        np.add.at(w_out, negatives, -rate * g_negs)
        return loss

    run_epochs(
        documents, step, config, config.learning_rate, counts, source, "skip-gram",
        pair_count=context_pair_counter(config.window),
    )

    keep = counts > 0
    tokens = [token for token, kept in zip(corpus.vocabulary.tokens, keep) if kept]
    return EmbeddingTable(kind="word", keys=tokens, vectors=w_in[keep])
