"""
Pluggable stemming.

The morphological analyser used for the reference experiments is an external
tool, so stemming is an interface: the identity stemmer is the default and a
lookup-table stemmer replays stems exported offline (token<TAB>stem).
"""
import logging
from collections import Counter
from pathlib import Path
from typing import Protocol, runtime_checkable

from src.constants import MAX_TOKEN_LENGTH, MIN_TOKEN_LENGTH, SPECIAL_TOKENS

logger = logging.getLogger(__name__)


@runtime_checkable
class Stemmer(Protocol):
    """Deterministic token -> stem mapping."""

    def stem(self, token: str) -> str:
        ...


class IdentityStemmer:
    """Stemmer that returns every token unchanged."""

    def stem(self, token: str) -> str:
        return token


class LookupStemmer:
    """Stemmer backed by a token -> stem table; unknown tokens pass through."""

    def __init__(self, table: dict[str, str]):
        self.table = dict(table)

    @classmethod
    def from_tsv(cls, path: Path) -> "LookupStemmer":
        """
        Load a `token<TAB>stem` table.

        Args:
            path: TSV file path

        Returns:
            LookupStemmer instance

        Raises:
            FileNotFoundError: If the file does not exist
            ValueError: If a row does not have exactly two fields
        """
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Stemmer table not found: {path}")

        table = {}
        with path.open(encoding="utf-8") as handle:
            for line_number, line in enumerate(handle, start=1):
                line = line.rstrip("\n")
                if not line.strip():
                    continue
                fields = line.split("\t")
                if len(fields) != 2 or not fields[0] or not fields[1]:
                    raise ValueError(f"{path}:{line_number}: expected 'token<TAB>stem'")
                table[fields[0]] = fields[1]

        logger.info(f"✅ Loaded {len(table)} stems from {path.name}")
        return cls(table)

    def stem(self, token: str) -> str:
        return self.table.get(token, token)


def _is_valid_stem(stem) -> bool:
    return isinstance(stem, str) and len(stem) >= MIN_TOKEN_LENGTH and stem.isascii() and stem.isalpha()


def _is_kept(stem: str, stopwords: frozenset[str]) -> bool:
    return len(stem) <= MAX_TOKEN_LENGTH and stem not in stopwords


def stem_corpus(
    corpus: list[list[str]],
    stemmer: Stemmer,
    stopwords: frozenset[str] = frozenset(),
) -> tuple[list[list[str]], int]:
    """
    Stem tokens that occur more than once and drop over-long tokens.

    Frequencies are counted over the whole corpus. Tokens seen once stay
    unstemmed; special tokens are never stemmed. A stemmer that raises, or
    returns something that is not an alphabetic token of length >= 2, leaves
    the token unchanged and counts a warning. Any resulting token longer than
    30 characters, or that stems to a stopword, is discarded.

    Args:
        corpus: Token sequences
        stemmer: Stemmer to apply
        stopwords: Stems that must not reach the vocabulary

    Returns:
        Tuple of (stemmed token sequences, number of stemmer failures)
    """
    frequency = Counter(token for doc in corpus for token in doc)

    stems: dict[str, str] = {}
    failures = 0
    for token in sorted(frequency):
        if frequency[token] <= 1 or token in SPECIAL_TOKENS:
            stems[token] = token
            continue
        try:
            stem = stemmer.stem(token)
        except Exception as e:
            logger.warning(f"⚠️  Stemmer failed on '{token}': {e}")
            failures += 1
            stems[token] = token
            continue
        if not _is_valid_stem(stem):
            logger.warning(f"⚠️  Stemmer returned invalid stem {stem!r} for '{token}'")
            failures += 1
            stems[token] = token
            continue
        stems[token] = stem

    stemmed = [
        [stems[token] for token in doc if _is_kept(stems[token], stopwords)]
        for doc in corpus
    ]

    if failures:
        logger.warning(f"⚠️  {failures} tokens passed through unstemmed after stemmer failures")
    return stemmed, failures
