"""
Tests for the shared matrix kernels.
"""
import numpy as np
import pytest
import scipy.sparse as sp

from src.numerics.matrices import (
    as_csr,
    draw_dropout_mask,
    dropout,
    glorot_init,
    load_sparse,
    save_sparse,
    softmax_rows,
    spmm,
)


class TestAsCsr:
    """Canonical CSR conversion."""

    def test_sums_duplicates_and_drops_zeros(self):
        coo = sp.coo_matrix(([1.0, 2.0, 0.0], ([0, 0, 1], [1, 1, 0])), shape=(2, 2))
        csr = as_csr(coo)
        assert csr.nnz == 1
        assert csr[0, 1] == 3.0
        assert csr.has_sorted_indices

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError, match="non-finite"):
            as_csr(np.array([[np.nan, 1.0]]))


def test_spmm_matches_dense_product():
    rng = np.random.default_rng(0)
    dense_left = rng.random((4, 3)) * (rng.random((4, 3)) > 0.5)
    right = rng.random((3, 2))
    assert np.allclose(spmm(as_csr(dense_left), right), dense_left @ right)


def test_spmm_dimension_mismatch():
    with pytest.raises(ValueError, match="Dimension mismatch"):
        spmm(as_csr(np.eye(3)), np.ones((2, 2)))


def test_softmax_rows_stable():
    probabilities = softmax_rows(np.array([[1000.0, 1000.0], [0.0, np.log(3.0)]]))
    assert np.allclose(probabilities, [[0.5, 0.5], [0.25, 0.75]])
    assert np.allclose(probabilities.sum(axis=1), 1.0)


def test_glorot_bounds():
    weights = glorot_init(10, 6, np.random.default_rng(0))
    bound = np.sqrt(6.0 / 16)
    assert weights.shape == (10, 6)
    assert np.all(np.abs(weights) <= bound)
    with pytest.raises(ValueError):
        glorot_init(0, 3, np.random.default_rng(0))


class TestDropoutMask:
    """Inverted dropout masks."""

    def test_values_and_rate(self):
        mask = draw_dropout_mask((200, 200), 0.5, np.random.default_rng(0))
        assert set(np.unique(mask)) <= {0.0, 2.0}
        assert abs(np.mean(mask == 0.0) - 0.5) < 0.02

    def test_zero_rate_keeps_everything(self):
        mask = draw_dropout_mask((3, 3), 0.0, np.random.default_rng(0))
        assert np.all(mask == 1.0)

    def test_rate_validated(self):
        with pytest.raises(ValueError, match="Dropout rate"):
            draw_dropout_mask((2, 2), 1.0, np.random.default_rng(0))

    def test_dropout_identity_outside_training(self):
        matrix = np.arange(6.0).reshape(2, 3)
        assert dropout(matrix, 0.5, np.random.default_rng(0), training=False) is matrix
        assert dropout(matrix, 0.0, np.random.default_rng(0), training=True) is matrix

    def test_dropout_preserves_expectation(self):
        matrix = np.full((400, 400), 3.0)
        dropped = dropout(matrix, 0.5, np.random.default_rng(7), training=True)
        assert set(np.unique(dropped)) <= {0.0, 6.0}
        assert abs(dropped.mean() - 3.0) < 0.05


def test_sparse_file_format(tmp_path):
    matrix = as_csr(np.array([[0.0, 0.1], [2.0, 0.0]]))
    path = tmp_path / "m.coo"
    save_sparse(path, matrix)
    assert path.read_text(encoding="utf-8").splitlines() == [
        "2 2 2",
        "0 1 0.10000000000000001",
        "1 0 2",
    ]
    loaded = load_sparse(path)
    assert (loaded != matrix).nnz == 0


def test_sparse_file_errors(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_sparse(tmp_path / "absent.coo")
    path = tmp_path / "short.coo"
    path.write_text("2 2 3\n0 0 1\n", encoding="utf-8")
    with pytest.raises(ValueError, match="declares 3"):
        load_sparse(path)


def test_sparse_file_round_trips_exactly(tmp_path):
    rng = np.random.default_rng(4)
    matrix = sp.random(60, 40, density=0.1, format="csr", random_state=1)
    matrix.data = rng.normal(size=matrix.nnz) * 10.0 ** rng.integers(-8, 8, size=matrix.nnz)
    path = tmp_path / "random.coo"
    save_sparse(path, matrix)
    loaded = load_sparse(path)
    assert loaded.shape == (60, 40)
    assert np.array_equal(loaded.indptr, matrix.indptr)
    assert np.array_equal(loaded.indices, matrix.indices)
    assert np.array_equal(loaded.data, matrix.data)
    save_sparse(tmp_path / "again.coo", loaded)
    assert (tmp_path / "again.coo").read_bytes() == path.read_bytes()


def test_empty_sparse_file(tmp_path):
    path = tmp_path / "empty.coo"
    save_sparse(path, sp.csr_matrix((3, 4)))
    assert path.read_text(encoding="utf-8") == "3 4 0\n"
    loaded = load_sparse(path)
    assert loaded.shape == (3, 4)
    assert loaded.nnz == 0


def test_sparse_file_malformed_triplet(tmp_path):
    path = tmp_path / "bad.coo"
    path.write_text("2 2 2\n0 1 0.5\n1 x 2\n", encoding="utf-8")
    with pytest.raises(ValueError, match="malformed"):
        load_sparse(path)
