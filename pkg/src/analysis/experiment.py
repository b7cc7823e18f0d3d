"""
Seeded experiment runner.

An ExperimentContext holds everything that is shared between runs (corpus,
split, cached graphs, cached document features, embedding tables). run_seeded
trains and evaluates one model once per seed and aggregates the results.
"""
import logging
import time
import tracemalloc
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import scipy.sparse as sp

from src.analysis.statistics import compute_metrics, summarize_runs
from src.classifiers.checkpoint import save_checkpoint
from src.classifiers.gcn import train_gcn
from src.classifiers.logreg import train_logreg
from src.classifiers.prediction import predict
from src.constants import DEFAULT_SEEDS, EmbeddingKind, ModelName, Split
from src.corpus.splits import select_labelled_subset
from src.embeddings.doc2vec import train_pvdbow, train_pvdm
from src.embeddings.table import (
    EmbeddingTable,
    average_corpus_embeddings,
    load_pretrained,
    save_embeddings,
)
from src.embeddings.word2vec import train_skipgram
from src.features.cooccurrence import count_windows, ppmi_matrix
from src.features.weighting import term_counts, tfidf
from src.graph.adjacency import HeteroGraph, build_adjacency, normalize_adjacency
from src.graph.artifacts import load_graph, save_graph
from src.graph.node_features import NodeFeatures, make_onehot_features, make_t2v_features
from src.models.configs import EmbeddingTrainConfig, ExperimentSpec
from src.models.corpus import ProcessedCorpus, SplitAssignment
from src.models.reports import ExperimentReport, Metrics, SweepResult

logger = logging.getLogger(__name__)

_TRAINERS = {
    EmbeddingKind.SKIPGRAM: train_skipgram,
    EmbeddingKind.PVDBOW: train_pvdbow,
    EmbeddingKind.PVDM: train_pvdm,
}


class ExperimentError(RuntimeError):
    """A seeded run failed; `partial` aggregates the seeds that completed."""

    def __init__(self, message: str, partial: Optional[ExperimentReport] = None):
        super().__init__(message)
        self.partial = partial
        # Set by callers that ran several experiments before this one failed
        self.completed: list[ExperimentReport] = []
        self.partial_sweep: Optional[SweepResult] = None


def graph_key(window_size: int, include_ppmi: bool) -> str:
    """Cache key of a graph variant, e.g. 'w30' or 'noppmi'."""
    return f"w{window_size}" if include_ppmi else "noppmi"


class EmbeddingStore:
    """Embedding tables per (kind, seed), loaded from disk or trained on demand."""

    def __init__(
        self,
        corpus: ProcessedCorpus,
        config: EmbeddingTrainConfig,
        directory: Optional[Path] = None,
        pretrained: Optional[Path] = None,
    ):
        """
        Initialize EmbeddingStore.

        Args:
            corpus: Corpus the tables are trained on
            config: Training settings
            directory: Where `<kind>_seed<k>.vec` files are read from and written to
            pretrained: Pretrained word-vector file for the averaged-embedding baseline
        """
        self.corpus = corpus
        self.config = config
        self.directory = Path(directory) if directory else None
        self.pretrained = Path(pretrained) if pretrained else None
        self._tables: dict[tuple[EmbeddingKind, int], EmbeddingTable] = {}
        self._pretrained_table: Optional[EmbeddingTable] = None

    def path_for(self, kind: EmbeddingKind, seed: int) -> Optional[Path]:
        if self.directory is None:
            return None
        return self.directory / f"{kind.value}_seed{seed}.vec"

    def table(self, kind: EmbeddingKind, seed: int) -> EmbeddingTable:
        """Table for a trainer kind and seed."""
        key = (kind, seed)
        if key in self._tables:
            return self._tables[key]

        path = self.path_for(kind, seed)
        if path is not None and path.exists():
            logger.info(f"📂 Loading {kind.value} embeddings: {path}")
            table = load_pretrained(path)
        else:
            logger.info(f"🧠 Training {kind.value} embeddings (seed {seed})")
            table = _TRAINERS[kind](self.corpus, self.config, seed)
            if path is not None:
                save_embeddings(table, path)
        self._tables[key] = table
        return table

    def pretrained_table(self) -> EmbeddingTable:
        """Pretrained word vectors (needs the `pretrained` path)."""
        if self._pretrained_table is None:
            if self.pretrained is None:
                raise ValueError("The avg-embed model needs a pretrained word-vector file (--pretrained)")
            self._pretrained_table = load_pretrained(self.pretrained)
        return self._pretrained_table


@dataclass
class ExperimentContext:
    """Shared inputs and caches for experiments over one corpus and split."""

    corpus: ProcessedCorpus
    split: SplitAssignment
    embeddings: Optional[EmbeddingStore] = None
    graph_dir: Optional[Path] = None
    checkpoint_dir: Optional[Path] = None
    record_resources: bool = True
    jobs: int = 1
    _graphs: dict[str, HeteroGraph] = field(default_factory=dict, repr=False)
    _doc_features: dict[str, sp.csr_matrix] = field(default_factory=dict, repr=False)

    def embedding_store(self) -> EmbeddingStore:
        if self.embeddings is None:
            self.embeddings = EmbeddingStore(self.corpus, EmbeddingTrainConfig())
        return self.embeddings

    def build_graph(self, window_size: int, include_ppmi: bool) -> HeteroGraph:
        """Build the normalised graph from scratch."""
        documents = self.corpus.documents
        vocab_size = len(self.corpus.vocabulary)
        ppmi = None
        if include_ppmi:
            stats = count_windows(documents, window_size, vocab_size, workers=self.jobs)
            ppmi = ppmi_matrix(stats)
        graph = build_adjacency(
            self.tfidf(), ppmi, window_size=window_size if include_ppmi else None
        )
        return normalize_adjacency(graph)

    def graph(self, window_size: int, include_ppmi: bool = True) -> HeteroGraph:
        """Normalised graph for a window size, cached in memory and under graph_dir."""
        key = graph_key(window_size, include_ppmi)
        if key in self._graphs:
            return self._graphs[key]

        directory = self.graph_dir / key if self.graph_dir else None
        if directory is not None and directory.exists():
            logger.info(f"📂 Graph cache hit: {directory}")
            graph = load_graph(directory)
        else:
            graph = self.build_graph(window_size, include_ppmi)
            if directory is not None:
                save_graph(directory, graph)
        self._graphs[key] = graph
        return graph

    def tfidf(self) -> sp.csr_matrix:
        if "tfidf" not in self._doc_features:
            self._doc_features["tfidf"] = tfidf(self.corpus.documents, self.corpus.vocabulary)
        return self._doc_features["tfidf"]

    def counts(self) -> sp.csr_matrix:
        if "counts" not in self._doc_features:
            self._doc_features["counts"] = term_counts(self.corpus.documents, self.corpus.vocabulary)
        return self._doc_features["counts"]

    def node_features(self, model: ModelName, graph: HeteroGraph, seed: int) -> NodeFeatures:
        """One-hot features for textgcn, skip-gram + PV-DBOW vectors for textgcn-t2v."""
        if model == ModelName.TEXTGCN:
            return make_onehot_features(graph)
        store = self.embedding_store()
        return make_t2v_features(
            graph,
            word_vectors=store.table(EmbeddingKind.SKIPGRAM, seed),
            doc_vectors=store.table(EmbeddingKind.PVDBOW, seed),
            doc_keys=self.corpus.doc_ids,
            word_keys=self.corpus.vocabulary.tokens,
        )

    def document_features(self, model: ModelName, seed: int):
        """|docs| x F matrix for a logistic-regression baseline."""
        if model == ModelName.TFIDF:
            return self.tfidf()
        if model == ModelName.COUNTS:
            return self.counts()
        store = self.embedding_store()
        if model == ModelName.AVG_EMBED:
            return average_corpus_embeddings(self.corpus.token_documents(), store.pretrained_table())
        kind = EmbeddingKind.PVDBOW if model == ModelName.PVDBOW else EmbeddingKind.PVDM
        return store.table(kind, seed).matrix_for(self.corpus.doc_ids)

    def labelled_mask(self, spec: ExperimentSpec, seed: int) -> np.ndarray:
        """Labelled subset of the train split for a run."""
        mask_seed = spec.split_seed if spec.fixed_label_mask else seed
        return select_labelled_subset(self.split, spec.label_proportion, mask_seed)


@dataclass
class SeedRun:
    """Outcome of one seeded run."""

    seed: int
    metrics: Metrics
    build_features_s: float
    train_s: float


def run_single(context: ExperimentContext, spec: ExperimentSpec, seed: int) -> SeedRun:
    """
    Train and evaluate one model for one seed.

    The labelled subset is drawn, the model is trained on it (GCN with
    validation-based selection, baselines with logistic regression) and
    scored on the test split.
    """
    corpus = context.corpus
    labels = corpus.label_array()
    labelled = context.labelled_mask(spec, seed)
    test_rows = context.split.indices(Split.TEST)
    n_classes = corpus.n_classes

    start = time.perf_counter()
    if spec.model.is_graph_model:
        graph = context.graph(spec.window_size, spec.include_ppmi)
        features = context.node_features(spec.model, graph, seed)
        features_done = time.perf_counter()
        params, history = train_gcn(
            graph,
            features,
            labels,
            labelled,
            context.split.mask(Split.VALIDATION),
            spec.train.model_copy(update={"seed": seed}),
            n_classes=n_classes,
        )
        predictions = predict(params, features, graph)[test_rows]
        checkpoint_meta = {"best_epoch": history.best_epoch}
    else:
        features = context.document_features(spec.model, seed)
        features_done = time.perf_counter()
        labelled_rows = np.flatnonzero(labelled)
        params = train_logreg(features[labelled_rows], labels[labelled_rows], n_classes, spec.logreg, seed)
        predictions = predict(params, features[test_rows])
        checkpoint_meta = {}
    finished = time.perf_counter()

    if context.checkpoint_dir is not None:
        save_checkpoint(
            context.checkpoint_dir / f"{spec.model.value}_seed{seed}.ckpt",
            params,
            {"config": spec.model_dump(mode="json"), "seed": seed, **checkpoint_meta},
        )

    metrics = compute_metrics(predictions, labels[test_rows], n_classes)
    logger.info(
        f"📊 {spec.model.value} seed {seed}: accuracy {metrics.accuracy:.4f}, "
        f"macro F1 {metrics.macro_f1:.4f}"
    )
    return SeedRun(
        seed=seed,
        metrics=metrics,
        build_features_s=features_done - start,
        train_s=finished - features_done,
    )


def _run_job(context: ExperimentContext, spec: ExperimentSpec, seed: int) -> SeedRun:
    return run_single(context, spec, seed)


def run_seeded(
    context: ExperimentContext,
    spec: ExperimentSpec,
    seeds: Sequence[int] = DEFAULT_SEEDS,
    jobs: int = 1,
) -> ExperimentReport:
    """
    Run one experiment once per seed and aggregate mean and population std.

    Args:
        context: Shared corpus, split and caches
        spec: Model and hyperparameters
        seeds: Run seeds (at least one)
        jobs: Worker processes for independent seeds

    Returns:
        ExperimentReport

    Raises:
        ValueError: If no seed is given
        ExperimentError: If a run fails; completed seeds are in `partial`
    """
    seeds = list(seeds)
    if not seeds:
        raise ValueError("run_seeded needs at least one seed")

    owns_trace = context.record_resources and not tracemalloc.is_tracing()
    if owns_trace:
        tracemalloc.start()
    elif context.record_resources:
        tracemalloc.reset_peak()
    started = time.perf_counter()

    runs: list[SeedRun] = []
    failure: Optional[BaseException] = None
    failed_seed: Optional[int] = None
    build_graph_s = 0.0
    try:
        if spec.model.is_graph_model:
            graph_started = time.perf_counter()
            context.graph(spec.window_size, spec.include_ppmi)
            build_graph_s = time.perf_counter() - graph_started

        if jobs <= 1 or len(seeds) == 1:
            for seed in seeds:
                try:
                    runs.append(run_single(context, spec, seed))
                except Exception as e:
                    failure, failed_seed = e, seed
                    break
        else:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                futures = {pool.submit(_run_job, context, spec, seed): seed for seed in seeds}
                for future in as_completed(futures):
                    try:
                        runs.append(future.result())
                    except Exception as e:
                        if failure is None:
                            failure, failed_seed = e, futures[future]
    except Exception as e:
        failure = e
    finally:
        runtime = time.perf_counter() - started
        peak = 0
        if context.record_resources:
            _, peak = tracemalloc.get_traced_memory()
        if owns_trace:
            tracemalloc.stop()

    def build_report(completed: list[SeedRun]) -> ExperimentReport:
        completed = sorted(completed, key=lambda run: run.seed)
        n = len(completed)
        timings = {
            "build_graph_s": build_graph_s,
            "build_features_s": sum(run.build_features_s for run in completed) / n,
            "train_s": sum(run.train_s for run in completed) / n,
        }
        if not context.record_resources:
            timings = {name: 0.0 for name in timings}
        return summarize_runs(
            model=spec.model.value,
            seeds=[run.seed for run in completed],
            per_seed_metrics=[run.metrics for run in completed],
            class_names=context.corpus.class_names,
            config={**spec.model_dump(mode="json"), "seeds": seeds},
            runtime_s=runtime if context.record_resources else 0.0,
            peak_mem_bytes=int(peak),
            timings=timings,
        )

    if failure is not None:
        partial = build_report(runs) if runs else None
        where = f" (seed {failed_seed})" if failed_seed is not None else ""
        logger.error(f"❌ {spec.model.value} failed{where}: {failure}")
        raise ExperimentError(f"{spec.model.value} run failed{where}: {failure}", partial) from failure

    report = build_report(runs)
    logger.info(
        f"✅ {spec.model.value}: macro F1 {report.macro_f1.mean:.4f} ± {report.macro_f1.std:.4f}, "
        f"accuracy {report.accuracy.mean:.4f} ± {report.accuracy.std:.4f} over {len(seeds)} seeds"
    )
    return report
