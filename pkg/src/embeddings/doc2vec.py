"""
Paragraph vectors: PV-DBOW and PV-DM, both with negative sampling.

Vectors are trained for every document of the corpus (transductive setting),
so there is no inference step for unseen documents.
"""
import logging

import numpy as np

from src.embeddings.sampler import pair_loss_and_grads
from src.embeddings.table import EmbeddingTable
from src.embeddings.word2vec import (
    init_input_vectors,
    run_epochs,
    trainable_documents,
    window_offsets,
)
from src.models.configs import EmbeddingTrainConfig
from src.models.corpus import ProcessedCorpus
from src.numerics.random_source import RandomSource

logger = logging.getLogger(__name__)


def train_pvdbow(corpus: ProcessedCorpus, config: EmbeddingTrainConfig, seed: int) -> EmbeddingTable:
    """
    Distributed bag of words: the document vector predicts each of its tokens.

    Args:
        corpus: Processed corpus
        config: Training settings (initial rate config.learning_rate)
        seed: Run seed

    Returns:
        Document table keyed by document id, one row per document
    """
    documents, counts = trainable_documents(corpus, config.min_count)
    source = RandomSource(seed)
    doc_vectors = init_input_vectors(len(documents), config.dimension, source.substream("doc-init"))
    w_out = np.zeros((len(counts), config.dimension))

    def step(doc_index, tokens, start, stop, rate, sampler):
        targets = tokens[start:stop]
        negatives = sampler.draw((len(targets), config.negatives))
        inputs = np.broadcast_to(doc_vectors[doc_index], (len(targets), config.dimension))
        loss, g_in, g_pos, g_negs = pair_loss_and_grads(
            inputs, w_out[targets], w_out[negatives], negatives != targets[:, np.newaxis]
        )
        doc_vectors[doc_index] -= rate * g_in.sum(axis=0)
        np.add.at(w_out, targets, -rate * g_pos)
        np.add.at(w_out, negatives, -rate * g_negs)
        return loss

    run_epochs(documents, step, config, config.learning_rate, counts, source, "PV-DBOW")
    return EmbeddingTable(kind="document", keys=list(corpus.doc_ids), vectors=doc_vectors)


def train_pvdm(corpus: ProcessedCorpus, config: EmbeddingTrainConfig, seed: int) -> EmbeddingTable:
    """
    Distributed memory: the mean of the document vector and the surrounding
    word vectors predicts the center word.

    Args:
        corpus: Processed corpus
        config: Training settings (initial rate config.dm_learning_rate)
        seed: Run seed

    Returns:
        Document table keyed by document id, one row per document
    """
    documents, counts = trainable_documents(corpus, config.min_count)
    source = RandomSource(seed)
    doc_vectors = init_input_vectors(len(documents), config.dimension, source.substream("doc-init"))
    w_in = init_input_vectors(len(counts), config.dimension, source.substream("word-init"))
    w_out = np.zeros((len(counts), config.dimension))
    offsets = window_offsets(config.window)

    def step(doc_index, tokens, start, stop, rate, sampler):
        positions = np.arange(start, stop)
        context = positions[:, np.newaxis] + offsets
        valid = (context >= 0) & (context < len(tokens))
        context_tokens = tokens[np.clip(context, 0, len(tokens) - 1)]
        inputs_per_row = 1.0 + valid.sum(axis=1)

        context_sum = (w_in[context_tokens] * valid[:, :, np.newaxis]).sum(axis=1)
        hidden = (doc_vectors[doc_index] + context_sum) / inputs_per_row[:, np.newaxis]

        centers = tokens[positions]
        negatives = sampler.draw((len(centers), config.negatives))
        loss, g_hidden, g_pos, g_negs = pair_loss_and_grads(
            hidden, w_out[centers], w_out[negatives], negatives != centers[:, np.newaxis]
        )
        g_inputs = g_hidden / inputs_per_row[:, np.newaxis]

        doc_vectors[doc_index] -= rate * g_inputs.sum(axis=0)
        per_context = np.broadcast_to(g_inputs[:, np.newaxis, :], context_tokens.shape + (config.dimension,))
        np.add.at(w_in, context_tokens[valid], -rate * per_context[valid])
        np.add.at(w_out, centers, -rate * g_pos)
        np.add.at(w_out, negatives, -rate * g_negs)
        return loss

    run_epochs(documents, step, config, config.dm_learning_rate, counts, source, "PV-DM")
    return EmbeddingTable(kind="document", keys=list(corpus.doc_ids), vectors=doc_vectors)
