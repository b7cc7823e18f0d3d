"""
Embedding tables and the plain-text vector format.

Format: header `count dim`, then `token v1 ... vdim` per line. Document tables
are written with `doc:<id>` tokens; a file whose tokens all carry the prefix
loads back as a document table.
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal, Sequence

import numpy as np

from src.constants import PRINT_PRECISION

logger = logging.getLogger(__name__)

DOC_PREFIX = "doc:"

TableKind = Literal["word", "document"]


@dataclass(eq=False)
class EmbeddingTable:
    """Key -> vector map backed by one dense matrix."""

    kind: TableKind
    keys: list[str]
    vectors: np.ndarray
    _index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        self.vectors = np.asarray(self.vectors, dtype=np.float64)
        if self.vectors.ndim != 2 or self.vectors.shape[0] != len(self.keys):
            raise ValueError(
                f"Expected {len(self.keys)} vectors, got array of shape {self.vectors.shape}"
            )
        if not np.all(np.isfinite(self.vectors)):
            raise ValueError("Embedding table contains non-finite values")
        self._index = {key: i for i, key in enumerate(self.keys)}
        if len(self._index) != len(self.keys):
            raise ValueError("Embedding keys must be unique")

    @property
    def dimension(self) -> int:
        return int(self.vectors.shape[1])

    def __len__(self) -> int:
        return len(self.keys)

    def __contains__(self, key: str) -> bool:
        return key in self._index

    def vector(self, key: str) -> np.ndarray:
        """Vector for a key (KeyError if absent)."""
        return self.vectors[self._index[key]]

    def matrix_for(self, keys: Sequence[str]) -> np.ndarray:
        """Stack vectors for keys in the given order."""
        rows = [self._index[key] for key in keys]
        return self.vectors[rows]


def save_embeddings(table: EmbeddingTable, path: Path) -> None:
    """
    Write a table in the text vector format.

    Args:
        table: Table to write
        path: Destination file (parent directories are created)
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    prefix = DOC_PREFIX if table.kind == "document" else ""
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        handle.write(f"{len(table)} {table.dimension}\n")
        for key, row in zip(table.keys, table.vectors):
            values = " ".join(format(float(v), PRINT_PRECISION) for v in row)
            handle.write(f"{prefix}{key} {values}\n")


def load_pretrained(path: Path) -> EmbeddingTable:
    """
    Read a table in the text vector format (e.g. pretrained fastText `.vec`).

    Args:
        path: Vector file

    Returns:
        EmbeddingTable; kind "document" when every token has the `doc:` prefix

    Raises:
        FileNotFoundError: If the file does not exist
        ValueError: Malformed header or line (with line number), or a line
            whose value count differs from the header dimension
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Embedding file not found: {path}")

    keys: list[str] = []
    rows: list[np.ndarray] = []
    with path.open(encoding="utf-8") as handle:
        header = handle.readline().split()
        try:
            declared_count, dimension = int(header[0]), int(header[1])
        except (IndexError, ValueError) as e:
            raise ValueError(f"{path}:1: expected 'count dim' header") from e
        if dimension < 1:
            raise ValueError(f"{path}:1: dimension must be positive")

        for line_number, line in enumerate(handle, start=2):
            parts = line.rstrip("\n").split(" ")
            parts = [p for p in parts if p]
            if not parts:
                continue
            if len(parts) - 1 != dimension:
                raise ValueError(
                    f"{path}:{line_number}: expected {dimension} values, found {len(parts) - 1}"
                )
            try:
                rows.append(np.array([float(v) for v in parts[1:]], dtype=np.float64))
            except ValueError as e:
                raise ValueError(f"{path}:{line_number}: non-numeric value") from e
            keys.append(parts[0])

    if len(keys) != declared_count:
        logger.warning(f"⚠️  {path}: header declares {declared_count} vectors, read {len(keys)}")

    vectors = np.vstack(rows) if rows else np.zeros((0, dimension))
    if keys and all(key.startswith(DOC_PREFIX) for key in keys):
        return EmbeddingTable(
            kind="document",
            keys=[key[len(DOC_PREFIX):] for key in keys],
            vectors=vectors,
        )
    return EmbeddingTable(kind="word", keys=keys, vectors=vectors)


def average_document_embedding(tokens: Sequence[str], table: EmbeddingTable) -> np.ndarray:
    """
    Mean of the vectors of the tokens present in a word table.

    Tokens missing from the table are skipped; a document with no covered
    token maps to the zero vector.
    """
    if table.kind != "word":
        raise ValueError("Averaging needs a word table")
    present = [token for token in tokens if token in table]
    if not present:
        return np.zeros(table.dimension)
    return table.matrix_for(present).mean(axis=0)


def average_corpus_embeddings(
    documents: Sequence[Sequence[str]],
    table: EmbeddingTable,
) -> np.ndarray:
    """Dense |docs| x dim matrix of averaged word vectors."""
    matrix = np.zeros((len(documents), table.dimension))
    covered = 0
    for i, tokens in enumerate(documents):
        matrix[i] = average_document_embedding(tokens, table)
        covered += bool(np.any(matrix[i]))
    logger.info(f"📊 Averaged embeddings: {covered}/{len(documents)} documents have covered tokens")
    return matrix
