"""
Work directory layout and artifact cache.

    <workdir>/corpus/       corpus.jsonl, classes.txt, vocab.tsv, split.csv,
                            split_table.md, manifest.json
    <workdir>/graphs/<corpus digest>/<w30|noppmi>/   adjacency.coo, graph.json
    <workdir>/embeddings/   <kind>_seed<k>.vec, manifest.json
    <workdir>/checkpoints/  <model>_seed<k>.ckpt
    <workdir>/results/<name>/  metrics.json, summary.csv, plotdata_*.csv, results.md

Cache entries are keyed by content hashes of their inputs, so a changed
dataset, stopword list, stemmer table or split seed invalidates them.
"""
import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Optional

from src.corpus.dataset import CLASSES_FILE, CORPUS_FILE, VOCAB_FILE, load_corpus, save_corpus
from src.corpus.splits import load_split, render_split_table, save_split, split_table
from src.models.configs import EmbeddingTrainConfig
from src.models.corpus import ProcessedCorpus, SplitAssignment

logger = logging.getLogger(__name__)

SPLIT_FILE = "split.csv"
SPLIT_TABLE_FILE = "split_table.md"
MANIFEST_FILE = "manifest.json"
DIGEST_LENGTH = 12


def file_digest(path: Optional[Path]) -> str:
    """SHA-256 of a file's bytes ('none' for no file)."""
    if path is None:
        return "none"
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Input file not found: {path}")
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_json(path: Path, payload: dict[str, Any]) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


class Workspace:
    """On-disk artifacts of one work directory."""

    def __init__(self, root: Path):
        """
        Initialize Workspace.

        Args:
            root: Work directory (created if missing)
        """
        self.root = Path(root)
        self.corpus_dir = self.root / "corpus"
        self.graphs_root = self.root / "graphs"
        self.embeddings_dir = self.root / "embeddings"
        self.checkpoints_dir = self.root / "checkpoints"
        self.results_root = self.root / "results"
        self.root.mkdir(parents=True, exist_ok=True)

    # ==========================================================================
    # Corpus stage
    # ==========================================================================

    @staticmethod
    def input_digest(
        dataset: Path,
        stopwords: Optional[Path],
        stemmer_table: Optional[Path],
        split_seed: int,
        label_proportion: float = 1.0,
    ) -> str:
        """Hash of every input that determines the preprocessed corpus and split."""
        parts = [
            f"dataset={file_digest(dataset)}",
            f"stopwords={file_digest(stopwords)}",
            f"stemmer={file_digest(stemmer_table)}",
            f"split_seed={split_seed}",
            f"label_proportion={label_proportion!r}",
        ]
        return hashlib.sha256("\n".join(parts).encode("utf-8")).hexdigest()

    def manifest(self) -> dict[str, Any]:
        path = self.corpus_dir / MANIFEST_FILE
        if not path.exists():
            return {}
        return json.loads(path.read_text(encoding="utf-8"))

    def corpus_is_current(self, input_digest: str) -> bool:
        """True when the cached corpus was built from the same inputs."""
        required = [CORPUS_FILE, CLASSES_FILE, VOCAB_FILE, SPLIT_FILE]
        if not all((self.corpus_dir / name).exists() for name in required):
            return False
        return self.manifest().get("input_digest") == input_digest

    def save_preprocessed(
        self,
        corpus: ProcessedCorpus,
        split: SplitAssignment,
        input_digest: str,
        stats: dict[str, Any],
    ) -> Path:
        """Write corpus, vocabulary, split, split table and manifest."""
        self.corpus_dir.mkdir(parents=True, exist_ok=True)
        save_corpus(self.corpus_dir, corpus)
        save_split(self.corpus_dir / SPLIT_FILE, corpus.doc_ids, split)
        (self.corpus_dir / SPLIT_TABLE_FILE).write_text(
            render_split_table(split_table(corpus, split)), encoding="utf-8"
        )
        _write_json(self.corpus_dir / MANIFEST_FILE, {"input_digest": input_digest, "stats": stats})
        logger.info(f"💾 Corpus artifacts written to {self.corpus_dir}")
        return self.corpus_dir

    def load_corpus(self) -> ProcessedCorpus:
        """Load the preprocessed corpus (FileNotFoundError names the missing file)."""
        return load_corpus(self.corpus_dir)

    def load_split(self, corpus: ProcessedCorpus) -> SplitAssignment:
        return load_split(self.corpus_dir / SPLIT_FILE, corpus.doc_ids)

    def corpus_digest(self) -> str:
        """Short hash of the preprocessed corpus files."""
        digest = hashlib.sha256()
        for name in (CORPUS_FILE, VOCAB_FILE):
            path = self.corpus_dir / name
            if not path.exists():
                raise FileNotFoundError(f"Preprocessed corpus missing: {path} (run preprocess first)")
            digest.update(path.read_bytes())
        return digest.hexdigest()[:DIGEST_LENGTH]

    # ==========================================================================
    # Graph / embedding / result locations
    # ==========================================================================

    def graph_dir(self) -> Path:
        """Graph cache directory for the current corpus."""
        return self.graphs_root / self.corpus_digest()

    def embedding_dir(self, config: EmbeddingTrainConfig) -> Path:
        """
        Embedding directory, emptied of tables trained for another corpus or config.
        """
        self.embeddings_dir.mkdir(parents=True, exist_ok=True)
        key = {
            "corpus": self.corpus_digest(),
            "config": config.model_dump(mode="json", exclude={"workers"}),
        }
        manifest_path = self.embeddings_dir / MANIFEST_FILE
        if manifest_path.exists():
            previous = json.loads(manifest_path.read_text(encoding="utf-8"))
            if previous != key:
                stale = sorted(self.embeddings_dir.glob("*.vec"))
                if stale:
                    logger.warning(f"⚠️  Embedding settings changed; discarding {len(stale)} cached tables")
                for path in stale:
                    path.unlink()
        _write_json(manifest_path, key)
        return self.embeddings_dir

    def results_dir(self, name: str) -> Path:
        path = self.results_root / name
        path.mkdir(parents=True, exist_ok=True)
        return path
