"""
Tests for sliding-window counts and PPMI.
"""
import math

import numpy as np
import pytest
import scipy.sparse as sp

from src.features.cooccurrence import (
    CooccurrenceStats,
    count_windows,
    load_cooccurrence,
    pmi,
    ppmi_matrix,
    save_cooccurrence,
)


@pytest.fixture
def paired_corpus():
    """Words 0/1 always appear together, as do 2/3."""
    return [[0, 1], [0, 1], [2, 3]]


class TestCountWindows:
    """Window statistics."""

    def test_short_documents_are_single_windows(self, paired_corpus):
        stats = count_windows(paired_corpus, window_size=2)
        assert stats.total_windows == 3
        assert stats.single_counts.tolist() == [2, 2, 1, 1]
        assert stats.pair_count(0, 1) == 2
        assert stats.pair_count(1, 0) == 2
        assert stats.pair_count(2, 3) == 1
        assert stats.pair_count(0, 2) == 0

    def test_sliding_windows(self):
        stats = count_windows([[0, 1, 2, 0]], window_size=2)
        assert stats.total_windows == 3
        assert stats.single_counts.tolist() == [2, 2, 2]
        assert stats.pair_count(0, 1) == 1
        assert stats.pair_count(1, 2) == 1
        assert stats.pair_count(0, 2) == 1

    def test_membership_is_binary(self):
        stats = count_windows([[0, 0, 1]], window_size=3)
        assert stats.total_windows == 1
        assert stats.single_counts.tolist() == [1, 1]
        assert stats.pair_count(0, 0) == 0

    def test_window_longer_than_document(self):
        stats = count_windows([[0, 1, 2]], window_size=30)
        assert stats.total_windows == 1
        assert stats.pair_count(0, 2) == 1

    def test_windows_stay_inside_documents(self):
        stats = count_windows([[0], [1]], window_size=5)
        assert stats.total_windows == 2
        assert stats.pair_count(0, 1) == 0

    def test_workers_merge_to_same_counts(self):
        rng = np.random.default_rng(0)
        corpus = [rng.integers(0, 20, size=12).tolist() for _ in range(16)]
        serial = count_windows(corpus, 4, vocab_size=20)
        parallel = count_windows(corpus, 4, vocab_size=20, workers=2)
        assert serial.total_windows == parallel.total_windows
        assert np.array_equal(serial.single_counts, parallel.single_counts)
        assert (serial.pair_counts != parallel.pair_counts).nnz == 0

    def test_invalid_arguments(self):
        with pytest.raises(ValueError, match="Window size"):
            count_windows([[0]], window_size=0)
        with pytest.raises(ValueError, match="empty corpus"):
            count_windows([], window_size=3)


class TestPmi:
    """PMI and the PPMI matrix."""

    def test_pmi_values(self, paired_corpus):
        stats = count_windows(paired_corpus, window_size=2)
        assert pmi(stats, 0, 1) == pytest.approx(math.log(1.5))
        assert pmi(stats, 2, 3) == pytest.approx(math.log(3.0))
        assert pmi(stats, 0, 2) is None

    def test_pmi_needs_distinct_words(self, paired_corpus):
        stats = count_windows(paired_corpus, window_size=2)
        with pytest.raises(ValueError):
            pmi(stats, 1, 1)

    def test_ppmi_keeps_positive_symmetric_entries(self, paired_corpus):
        matrix = ppmi_matrix(count_windows(paired_corpus, window_size=2)).toarray()
        assert np.allclose(matrix, matrix.T)
        assert np.all(np.diag(matrix) == 0)
        assert matrix[0, 1] == pytest.approx(math.log(1.5))
        assert matrix[2, 3] == pytest.approx(math.log(3.0))
        assert np.count_nonzero(matrix) == 4

    def test_negative_pmi_dropped(self):
        stats = count_windows([[0, 1, 2, 0]], window_size=2)
        # PMI(0, 1) = ln(3/4) < 0
        assert pmi(stats, 0, 1) < 0
        assert ppmi_matrix(stats).nnz == 0

    def test_pmi_increases_with_joint_count(self):
        values = []
        for joint in range(1, 21):
            stats = CooccurrenceStats(
                window_size=5,
                total_windows=100,
                single_counts=np.array([20, 30], dtype=np.int64),
                pair_counts=sp.csr_matrix(np.array([[0, joint], [0, 0]], dtype=np.int64)),
            )
            values.append(pmi(stats, 0, 1))
        assert all(later > earlier for earlier, later in zip(values, values[1:]))
        assert values[-1] == pytest.approx(math.log(20 * 100 / (20 * 30)))


def test_statistics_file(tmp_path, paired_corpus):
    stats = count_windows(paired_corpus, window_size=2)
    path = tmp_path / "cooc.txt"
    save_cooccurrence(path, stats)
    assert path.read_text(encoding="utf-8").splitlines()[0] == "2 3 4"
    loaded = load_cooccurrence(path)
    assert loaded.total_windows == 3
    assert loaded.pair_count(0, 1) == 2
