"""
Text cleaning and tokenization for news articles.

記事本文を小文字化・ASCII化し、Twitterのメタ情報を除去してからトークン化する。
"""
import logging
import re
import unicodedata
from pathlib import Path
from typing import Iterable, Optional

from nltk.tokenize import wordpunct_tokenize

from src.constants import (
    LAUGHTER_TOKEN,
    MIN_TOKEN_LENGTH,
    ONOMATOPOEIA_TOKEN,
)

logger = logging.getLogger(__name__)

DEFAULT_STOPWORDS_PATH = Path(__file__).parent / "stopwords_sw.txt"

_URL_PATTERN = re.compile(r"https?://\S+|www\.\S+")
_META_PATTERN = re.compile(r"(?<!\S)[@#]\S*")
_WHITESPACE_PATTERN = re.compile(r"\s+")

# "haha", "hehehe", "hahihe": ha/he/hi units, at least 4 characters
_LAUGHTER_PATTERN = re.compile(r"^(?:ha|he|hi){2,}$")
# "bumbum", "taktaktak": a 2-4 letter unit repeated at least twice
_ONOMATOPOEIA_PATTERN = re.compile(r"^([a-z]{2,4})\1+$")


def to_ascii(text: str) -> str:
    """Map characters to ASCII via compatibility decomposition, dropping what does not map."""
    decomposed = unicodedata.normalize("NFKD", text)
    stripped = "".join(ch for ch in decomposed if not unicodedata.combining(ch))
    return stripped.encode("ascii", "ignore").decode("ascii")


def clean_text(raw: str) -> str:
    """
    Normalise raw article text.

    Args:
        raw: UTF-8 text

    Returns:
        Lowercased ASCII text without URLs, @mentions or #hashtags and with
        whitespace collapsed to single spaces
    """
    text = to_ascii(raw).lower()
    text = _URL_PATTERN.sub(" ", text)
    text = _META_PATTERN.sub(" ", text)
    return _WHITESPACE_PATTERN.sub(" ", text).strip()


def tokenize_and_filter(text: str, stopwords: Iterable[str]) -> list[str]:
    """
    Split cleaned text into word tokens and drop unusable ones.

    Tokens are split on whitespace and punctuation boundaries; stopwords,
    single characters and tokens containing any non-alphabetic character are
    removed.

    Args:
        text: Output of clean_text
        stopwords: Tokens to exclude

    Returns:
        Filtered token list (possibly empty)
    """
    stop = stopwords if isinstance(stopwords, (set, frozenset)) else set(stopwords)
    return [
        token for token in wordpunct_tokenize(text)
        if len(token) >= MIN_TOKEN_LENGTH
        and token.isascii()
        and token.isalpha()
        and token not in stop
    ]


def normalize_special_token(token: str) -> str:
    """Map laughter and onomatopoeic tokens to their special tokens."""
    if _LAUGHTER_PATTERN.match(token):
        return LAUGHTER_TOKEN
    if _ONOMATOPOEIA_PATTERN.match(token):
        return ONOMATOPOEIA_TOKEN
    return token


def normalize_special_tokens(tokens: list[str]) -> list[str]:
    """Apply normalize_special_token to every token."""
    return [normalize_special_token(token) for token in tokens]


def load_stopwords(path: Optional[Path] = None) -> frozenset[str]:
    """
    Load a stopword list (one token per line, '#' starts a comment).

    Args:
        path: Stopword file. If None, the bundled Swahili list is used.

    Returns:
        Set of lowercased stopwords

    Raises:
        FileNotFoundError: If the file does not exist
    """
    source = Path(path) if path is not None else DEFAULT_STOPWORDS_PATH
    if not source.exists():
        raise FileNotFoundError(f"Stopword file not found: {source}")

    words = set()
    for line in source.read_text(encoding="utf-8").splitlines():
        entry = line.split("#", 1)[0].strip().lower()
        if entry:
            words.add(entry)

    logger.info(f"📚 Loaded {len(words)} stopwords from {source.name}")
    return frozenset(words)
