"""
Sliding-window co-occurrence statistics and PPMI.

W(i) counts windows containing word i, W(i,j) windows containing both i and j
(membership is binary per window), #W the total number of windows. Windows
slide by one token inside a document and never cross document boundaries; a
document no longer than the window is a single window.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import scipy.sparse as sp
from numpy.lib.stride_tricks import sliding_window_view

from src.numerics.matrices import as_csr

logger = logging.getLogger(__name__)


@dataclass
class CooccurrenceStats:
    """Window counts for a corpus."""

    window_size: int
    total_windows: int
    single_counts: np.ndarray      # W(i), int64, length |V|
    pair_counts: sp.csr_matrix     # W(i,j) for i < j, upper triangle, int64

    @property
    def vocab_size(self) -> int:
        return len(self.single_counts)

    def pair_count(self, i: int, j: int) -> int:
        """W(i, j) for any ordered pair (0 on the diagonal)."""
        if i == j:
            return 0
        low, high = (i, j) if i < j else (j, i)
        return int(self.pair_counts[low, high])

    def merge(self, other: "CooccurrenceStats") -> "CooccurrenceStats":
        """Add the counts of another partial result over the same vocabulary."""
        if other.window_size != self.window_size or other.vocab_size != self.vocab_size:
            raise ValueError("Cannot merge statistics with different window size or vocabulary")
        return CooccurrenceStats(
            window_size=self.window_size,
            total_windows=self.total_windows + other.total_windows,
            single_counts=self.single_counts + other.single_counts,
            pair_counts=as_csr(self.pair_counts + other.pair_counts, dtype=np.int64),
        )


def _document_windows(doc: np.ndarray, window_size: int) -> np.ndarray:
    if len(doc) <= window_size:
        return doc[np.newaxis, :]
    return sliding_window_view(doc, window_size)


def _count_chunk(
    docs: Sequence[Sequence[int]],
    window_size: int,
    vocab_size: int,
) -> CooccurrenceStats:
    single = np.zeros(vocab_size, dtype=np.int64)
    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    vals: list[np.ndarray] = []
    total = 0

    for doc in docs:
        tokens = np.asarray(doc, dtype=np.int64)
        if tokens.size == 0:
            continue
        windows = _document_windows(tokens, window_size)
        n_windows, width = windows.shape
        total += n_windows

        # Binary window x local-word membership matrix
        local_words, inverse = np.unique(windows, return_inverse=True)
        inverse = inverse.reshape(windows.shape)
        membership = sp.csr_matrix(
            (np.ones(n_windows * width, dtype=np.int64),
             (np.repeat(np.arange(n_windows), width), inverse.ravel())),
            shape=(n_windows, len(local_words)),
        )
        membership.sum_duplicates()
        membership.data[:] = 1

        single[local_words] += np.asarray(membership.sum(axis=0)).ravel()

        pairs = sp.triu(membership.T @ membership, k=1).tocoo()
        if pairs.nnz:
            rows.append(local_words[pairs.row])
            cols.append(local_words[pairs.col])
            vals.append(pairs.data.astype(np.int64))

    if rows:
        pair_matrix = sp.coo_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(vocab_size, vocab_size),
        )
    else:
        pair_matrix = sp.coo_matrix((vocab_size, vocab_size), dtype=np.int64)

    return CooccurrenceStats(
        window_size=window_size,
        total_windows=total,
        single_counts=single,
        pair_counts=as_csr(pair_matrix, dtype=np.int64),
    )


def count_windows(
    corpus: Sequence[Sequence[int]],
    window_size: int,
    vocab_size: Optional[int] = None,
    workers: int = 1,
) -> CooccurrenceStats:
    """
    Count sliding-window occurrences and co-occurrences.

    Args:
        corpus: Token-id sequences
        window_size: Window length in tokens (>= 1)
        vocab_size: Vocabulary size (defaults to max id + 1)
        workers: Worker processes; partial counts are merged by integer addition

    Returns:
        CooccurrenceStats

    Raises:
        ValueError: If the corpus is empty or window_size < 1
    """
    if window_size < 1:
        raise ValueError(f"Window size must be >= 1, got {window_size}")
    if not corpus:
        raise ValueError("Cannot count windows over an empty corpus")
    if vocab_size is None:
        vocab_size = 1 + max((max(doc) for doc in corpus if len(doc)), default=-1)

    if workers <= 1 or len(corpus) < 2 * workers:
        stats = _count_chunk(corpus, window_size, vocab_size)
    else:
        bounds = np.linspace(0, len(corpus), workers + 1).astype(int)
        chunks = [corpus[bounds[k]:bounds[k + 1]] for k in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(_count_chunk, chunks, [window_size] * workers, [vocab_size] * workers))
        stats = partials[0]
        for partial_stats in partials[1:]:
            stats = stats.merge(partial_stats)

    logger.info(
        f"🪟 Counted {stats.total_windows} windows (size {window_size}), "
        f"{stats.pair_counts.nnz} co-occurring word pairs"
    )
    return stats


def pmi(stats: CooccurrenceStats, i: int, j: int) -> Optional[float]:
    """
    Pointwise mutual information of two distinct words.

    Returns:
        ln((W(i,j)/#W) / ((W(i)/#W) (W(j)/#W))), or None when W(i,j), W(i)
        or W(j) is zero
    """
    if i == j:
        raise ValueError("PMI is defined for distinct words only")
    w_i = int(stats.single_counts[i])
    w_j = int(stats.single_counts[j])
    w_ij = stats.pair_count(i, j)
    if w_i == 0 or w_j == 0 or w_ij == 0:
        return None
    return float(np.log((w_ij * stats.total_windows) / (w_i * w_j)))


def ppmi_matrix(stats: CooccurrenceStats) -> sp.csr_matrix:
    """
    Symmetric positive PMI matrix (|V| x |V|).

    Only pairs with PMI > 0 are stored; the diagonal is empty.
    """
    upper = stats.pair_counts.tocoo()
    w_ij = upper.data.astype(np.int64)
    w_i = stats.single_counts[upper.row]
    w_j = stats.single_counts[upper.col]

    # Sign test in exact integer arithmetic: PMI > 0 <=> W(i,j) #W > W(i) W(j)
    positive = w_ij * stats.total_windows > w_i * w_j
    rows, cols = upper.row[positive], upper.col[positive]
    values = np.log(
        (w_ij[positive].astype(np.float64) * stats.total_windows)
        / (w_i[positive].astype(np.float64) * w_j[positive])
    )

    n = stats.vocab_size
    matrix = sp.coo_matrix(
        (np.concatenate([values, values]), (np.concatenate([rows, cols]), np.concatenate([cols, rows]))),
        shape=(n, n),
    )
    return as_csr(matrix)


def save_cooccurrence(path: Path, stats: CooccurrenceStats) -> None:
    """Write `window_size total_windows vocab_size`, then `i count` and `i j count` lines."""
    lines = [f"{stats.window_size} {stats.total_windows} {stats.vocab_size}"]
    lines.extend(f"{i} {int(c)}" for i, c in enumerate(stats.single_counts) if c)
    upper = stats.pair_counts.tocoo()
    lines.extend(f"{i} {j} {int(c)}" for i, j, c in zip(upper.row, upper.col, upper.data))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_cooccurrence(path: Path) -> CooccurrenceStats:
    """
    Read statistics written by save_cooccurrence.

    Raises:
        FileNotFoundError: If the file does not exist
        ValueError: On malformed lines
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Co-occurrence file not found: {path}")

    with path.open(encoding="utf-8") as handle:
        header = handle.readline().split()
        if len(header) != 3:
            raise ValueError(f"{path}:1: expected 'window_size total_windows vocab_size'")
        window_size, total_windows, vocab_size = (int(x) for x in header)
        single = np.zeros(vocab_size, dtype=np.int64)
        rows, cols, vals = [], [], []
        for line_number, line in enumerate(handle, start=2):
            parts = line.split()
            if len(parts) == 2:
                single[int(parts[0])] = int(parts[1])
            elif len(parts) == 3:
                rows.append(int(parts[0]))
                cols.append(int(parts[1]))
                vals.append(int(parts[2]))
            elif parts:
                raise ValueError(f"{path}:{line_number}: malformed line")

    pairs = sp.coo_matrix(
        (np.asarray(vals, dtype=np.int64), (np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64))),
        shape=(vocab_size, vocab_size),
    )
    return CooccurrenceStats(
        window_size=window_size,
        total_windows=total_windows,
        single_counts=single,
        pair_counts=as_csr(pairs, dtype=np.int64),
    )
