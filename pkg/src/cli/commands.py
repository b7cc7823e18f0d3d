"""
Command implementations behind the command-line entry point.

Each command takes a validated RunConfig plus process Settings, reads and
writes artifacts through a Workspace, and returns what it produced.
"""
import logging
from pathlib import Path
from typing import Optional, Sequence

from src.analysis.comparison import compare_models, render_results_table
from src.analysis.experiment import EmbeddingStore, ExperimentContext, ExperimentError, graph_key, run_seeded
from src.analysis.sweeps import sweep_label_proportion, sweep_window_size
from src.config import Settings
from src.constants import DEFAULT_PROPORTION_GRID, DEFAULT_WINDOW_GRID, EmbeddingKind, ModelName, SweepKind
from src.corpus.cleaning import load_stopwords
from src.corpus.dataset import read_dataset
from src.corpus.pipeline import preprocess_documents
from src.corpus.splits import render_split_table, select_labelled_subset, split_corpus, split_table
from src.corpus.stemmer import IdentityStemmer, LookupStemmer
from src.corpus.synthetic import generate_topic_corpus, write_dataset_csv
from src.models.configs import RunConfig
from src.models.reports import ExperimentReport, SweepResult
from src.storage.report_writer import emit_report
from src.storage.workspace import Workspace

logger = logging.getLogger(__name__)


def make_context(
    config: RunConfig,
    settings: Settings,
    workspace: Workspace,
    with_checkpoints: bool = False,
) -> ExperimentContext:
    """Experiment context over the preprocessed corpus of a workspace."""
    corpus = workspace.load_corpus()
    split = workspace.load_split(corpus)
    store = EmbeddingStore(
        corpus,
        config.embedding,
        directory=workspace.embedding_dir(config.embedding),
        pretrained=config.pretrained,
    )
    return ExperimentContext(
        corpus=corpus,
        split=split,
        embeddings=store,
        graph_dir=workspace.graph_dir(),
        checkpoint_dir=workspace.checkpoints_dir if with_checkpoints else None,
        record_resources=settings.record_resources,
        jobs=config.jobs,
    )


def cmd_preprocess(config: RunConfig, settings: Settings, workspace: Workspace) -> str:
    """
    Preprocess the dataset and split it.

    Skipped when the cached corpus was built from identical inputs.

    Returns:
        Markdown per-class split table
    """
    if config.dataset is None:
        raise ValueError("preprocess needs --dataset")

    digest = Workspace.input_digest(
        config.dataset, config.stopwords, config.stemmer_table, config.split_seed, config.label_proportion
    )
    if workspace.corpus_is_current(digest):
        logger.info(f"📂 Corpus cache hit ({workspace.corpus_dir}), skipping preprocessing")
        corpus = workspace.load_corpus()
        return render_split_table(split_table(corpus, workspace.load_split(corpus)))

    documents = read_dataset(config.dataset)
    stopwords = load_stopwords(config.stopwords)
    stemmer = LookupStemmer.from_tsv(config.stemmer_table) if config.stemmer_table else IdentityStemmer()

    corpus, stats = preprocess_documents(documents, stopwords, stemmer, workers=config.jobs)
    split = split_corpus(corpus, seed=config.split_seed)
    labelled = select_labelled_subset(split, config.label_proportion, config.split_seed)
    split = split.with_labelled(labelled)

    workspace.save_preprocessed(corpus, split, digest, stats.model_dump())
    return render_split_table(split_table(corpus, split))


def cmd_embed(config: RunConfig, settings: Settings, workspace: Workspace) -> list[Path]:
    """Train (or reuse) skip-gram, PV-DBOW and PV-DM tables for each seed."""
    corpus = workspace.load_corpus()
    store = EmbeddingStore(corpus, config.embedding, directory=workspace.embedding_dir(config.embedding))
    written = []
    for seed in config.seeds:
        for kind in EmbeddingKind:
            store.table(kind, seed)
            written.append(store.path_for(kind, seed))
    logger.info(f"✅ {len(written)} embedding tables in {store.directory}")
    return written


def cmd_build_graph(config: RunConfig, settings: Settings, workspace: Workspace) -> Path:
    """Build (or reuse) the normalised graph for the configured window."""
    context = make_context(config, settings, workspace)
    context.graph(config.window_size, config.include_ppmi)
    return context.graph_dir / graph_key(config.window_size, config.include_ppmi)


def _result_name(prefix: str, config: RunConfig) -> str:
    return f"{prefix}-{config.model.value}"


def _emit_partial(error: ExperimentError, output_dir: Path) -> None:
    reports = list(error.completed)
    if error.partial is not None:
        reports.append(error.partial)
    sweeps = [error.partial_sweep] if error.partial_sweep is not None else []
    if reports or sweeps:
        emit_report(reports, output_dir, sweeps)
        logger.warning(f"⚠️  Partial results written to {output_dir}")


def cmd_train(config: RunConfig, settings: Settings, workspace: Workspace) -> ExperimentReport:
    """Train one model over every seed, write checkpoints and metrics."""
    context = make_context(config, settings, workspace, with_checkpoints=True)
    output_dir = workspace.results_dir(_result_name("train", config))
    try:
        report = run_seeded(context, config.experiment_spec(), config.seeds, config.jobs)
    except ExperimentError as e:
        _emit_partial(e, output_dir)
        raise
    emit_report([report], output_dir)
    return report


def cmd_sweep(
    config: RunConfig,
    settings: Settings,
    workspace: Workspace,
    kind: SweepKind,
    sizes: Optional[Sequence[int]] = None,
    include_no_ppmi: bool = False,
    proportions: Optional[Sequence[float]] = None,
    models: Optional[Sequence[ModelName]] = None,
) -> SweepResult:
    """Run a window-size or label-proportion sweep and write its plot data."""
    context = make_context(config, settings, workspace)
    spec = config.experiment_spec()
    output_dir = workspace.results_dir(f"sweep-{kind.value}")
    try:
        if kind == SweepKind.WINDOW:
            result = sweep_window_size(
                context,
                list(DEFAULT_WINDOW_GRID) if sizes is None else list(sizes),
                spec,
                config.seeds,
                include_no_ppmi=include_no_ppmi,
                jobs=config.jobs,
            )
        else:
            result = sweep_label_proportion(
                context,
                list(DEFAULT_PROPORTION_GRID) if proportions is None else list(proportions),
                spec,
                models=models,
                seeds=config.seeds,
                jobs=config.jobs,
            )
    except ExperimentError as e:
        _emit_partial(e, output_dir)
        raise
    emit_report([], output_dir, [result])
    return result


def cmd_compare(
    config: RunConfig,
    settings: Settings,
    workspace: Workspace,
    models: Sequence[ModelName],
) -> str:
    """
    Run several models under the same seeds and split.

    Returns:
        Markdown results table
    """
    context = make_context(config, settings, workspace, with_checkpoints=True)
    output_dir = workspace.results_dir("compare")
    try:
        reports = compare_models(context, models, config.experiment_spec(), config.seeds, config.jobs)
    except ExperimentError as e:
        _emit_partial(e, output_dir)
        raise
    emit_report(reports, output_dir)
    return render_results_table(reports)


def cmd_demo_data(
    output: Path,
    n_docs: int,
    n_classes: int,
    words_per_topic: int,
    doc_length: int,
    seed: int,
) -> Path:
    """Write a synthetic topic corpus CSV."""
    documents = generate_topic_corpus(n_docs, n_classes, words_per_topic, doc_length, seed)
    output = Path(output)
    output.parent.mkdir(parents=True, exist_ok=True)
    write_dataset_csv(output, documents)
    logger.info(f"✅ Wrote {len(documents)} synthetic documents to {output}")
    return output
