"""
Dataset ingestion and processed-corpus artifacts.
"""
import json
import logging
from pathlib import Path

import pandas as pd

from src.constants import DATASET_COLUMNS
from src.corpus.vocabulary import load_vocabulary, save_vocabulary
from src.models.corpus import ProcessedCorpus, RawDocument

logger = logging.getLogger(__name__)

CORPUS_FILE = "corpus.jsonl"
CLASSES_FILE = "classes.txt"
VOCAB_FILE = "vocab.tsv"


def _read_frame(path: Path) -> pd.DataFrame:
    suffix = path.suffix.lower()
    try:
        if suffix in (".jsonl", ".json"):
            return pd.read_json(path, lines=True, dtype=False)
        return pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except pd.errors.ParserError as e:
        raise ValueError(f"Malformed dataset file {path}: {e}") from e
    except ValueError as e:
        raise ValueError(f"Malformed dataset file {path}: {e}") from e


def read_dataset(path: Path) -> list[RawDocument]:
    """
    Read the labelled dataset.

    CSV files need the header `id,content,category`; `.jsonl`/`.json` files
    are JSON-lines with the same field names.

    Args:
        path: Dataset file

    Returns:
        RawDocument list in file order

    Raises:
        FileNotFoundError: If the file does not exist
        ValueError: If a column is missing or a row has an empty id/category
            (the message carries the 1-based data row number)
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Dataset not found: {path}")

    frame = _read_frame(path)
    missing = [column for column in DATASET_COLUMNS if column not in frame.columns]
    if missing:
        raise ValueError(f"{path}: missing column(s) {missing}; expected header {','.join(DATASET_COLUMNS)}")

    documents = []
    for row_number, row in enumerate(frame[list(DATASET_COLUMNS)].itertuples(index=False), start=1):
        doc_id, content, category = ("" if pd.isna(v) else str(v) for v in row)
        if not doc_id.strip() or not category.strip():
            raise ValueError(f"{path}: row {row_number} has an empty id or category")
        documents.append(RawDocument(id=doc_id.strip(), content=content, category=category.strip()))

    ids = [doc.id for doc in documents]
    if len(set(ids)) != len(ids):
        raise ValueError(f"{path}: document ids are not unique")

    logger.info(f"📥 Read {len(documents)} documents from {path.name}")
    return documents


def save_corpus(directory: Path, corpus: ProcessedCorpus) -> None:
    """Write corpus.jsonl, classes.txt and vocab.tsv into a directory."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    with (directory / CORPUS_FILE).open("w", encoding="utf-8", newline="\n") as handle:
        for doc_id, label, tokens in zip(corpus.doc_ids, corpus.labels, corpus.documents):
            handle.write(json.dumps({"id": doc_id, "label": label, "token_ids": tokens}) + "\n")

    (directory / CLASSES_FILE).write_text("\n".join(corpus.class_names) + "\n", encoding="utf-8")
    save_vocabulary(directory / VOCAB_FILE, corpus.vocabulary)


def load_corpus(directory: Path) -> ProcessedCorpus:
    """
    Read a corpus written by save_corpus.

    Raises:
        FileNotFoundError: Naming the first missing artifact file
    """
    directory = Path(directory)
    for name in (CORPUS_FILE, CLASSES_FILE, VOCAB_FILE):
        if not (directory / name).exists():
            raise FileNotFoundError(f"Missing corpus artifact: {directory / name}")

    doc_ids, labels, documents = [], [], []
    with (directory / CORPUS_FILE).open(encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                doc_ids.append(str(record["id"]))
                labels.append(int(record["label"]))
                documents.append([int(t) for t in record["token_ids"]])
            except (json.JSONDecodeError, KeyError, TypeError) as e:
                raise ValueError(f"{directory / CORPUS_FILE}:{line_number}: malformed record ({e})") from e

    class_names = [
        line for line in (directory / CLASSES_FILE).read_text(encoding="utf-8").splitlines() if line
    ]
    return ProcessedCorpus(
        doc_ids=doc_ids,
        documents=documents,
        labels=labels,
        class_names=class_names,
        vocabulary=load_vocabulary(directory / VOCAB_FILE),
    )
