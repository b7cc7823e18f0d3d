"""
Vocabulary construction and its TSV artifact.
"""
import logging
from pathlib import Path
from typing import Sequence

from src.models.corpus import Vocabulary

logger = logging.getLogger(__name__)


def build_vocabulary(corpus: Sequence[Sequence[str]]) -> Vocabulary:
    """
    Assign ids in first-occurrence order and count frequencies.

    Args:
        corpus: Preprocessed token sequences

    Returns:
        Vocabulary with corpus and document frequency tables

    Raises:
        ValueError: If the corpus contains no tokens
    """
    index: dict[str, int] = {}
    frequency: list[int] = []
    doc_frequency: list[int] = []

    for doc in corpus:
        seen = set()
        for token in doc:
            token_id = index.get(token)
            if token_id is None:
                token_id = len(index)
                index[token] = token_id
                frequency.append(0)
                doc_frequency.append(0)
            frequency[token_id] += 1
            if token_id not in seen:
                seen.add(token_id)
                doc_frequency[token_id] += 1

    if not index:
        raise ValueError("Cannot build a vocabulary from an empty corpus")

    return Vocabulary(tokens=list(index), frequency=frequency, doc_frequency=doc_frequency)


def save_vocabulary(path: Path, vocabulary: Vocabulary) -> None:
    """Write `token<TAB>id<TAB>frequency<TAB>doc_frequency` rows in id order."""
    lines = [
        f"{token}\t{i}\t{freq}\t{df}"
        for i, (token, freq, df) in enumerate(
            zip(vocabulary.tokens, vocabulary.frequency, vocabulary.doc_frequency)
        )
    ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_vocabulary(path: Path) -> Vocabulary:
    """
    Read a vocabulary TSV.

    Raises:
        FileNotFoundError: If the file does not exist
        ValueError: If a row is malformed or ids are not dense and ordered
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Vocabulary file not found: {path}")

    tokens, frequency, doc_frequency = [], [], []
    with path.open(encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            fields = line.rstrip("\n").split("\t")
            if len(fields) != 4:
                raise ValueError(f"{path}:{line_number}: expected 4 tab-separated fields")
            token, token_id, freq, df = fields[0], int(fields[1]), int(fields[2]), int(fields[3])
            if token_id != len(tokens):
                raise ValueError(f"{path}:{line_number}: id {token_id} out of order")
            tokens.append(token)
            frequency.append(freq)
            doc_frequency.append(df)

    return Vocabulary(tokens=tokens, frequency=frequency, doc_frequency=doc_frequency)
