"""
Dense and sparse matrix kernels shared by every stage of the pipeline.

Dense matrices are float64 numpy arrays; sparse matrices are canonical
scipy CSR matrices (sorted column indices, no duplicates, no explicit zeros).
"""
import logging
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd
import scipy.sparse as sp

from src.constants import PRINT_PRECISION

logger = logging.getLogger(__name__)

SparseLike = Union[sp.spmatrix, sp.sparray, np.ndarray]


def as_csr(matrix: SparseLike, dtype=np.float64) -> sp.csr_matrix:
    """
    Convert a matrix to canonical CSR form.

    Args:
        matrix: Dense array or any scipy sparse matrix
        dtype: Value dtype of the result

    Returns:
        CSR matrix with sorted indices, summed duplicates and no explicit zeros

    Raises:
        ValueError: If any stored value is not finite
    """
    csr = sp.csr_matrix(matrix, dtype=dtype, copy=True)
    csr.sum_duplicates()
    csr.eliminate_zeros()
    csr.sort_indices()
    if csr.nnz and not np.all(np.isfinite(csr.data)):
        raise ValueError("Sparse matrix contains non-finite values")
    return csr


def spmm(sparse: sp.csr_matrix, dense: np.ndarray) -> np.ndarray:
    """
    Sparse-dense product S @ D.

    Rows are accumulated in column-index order, so the result is
    deterministic for a canonical CSR input.

    Args:
        sparse: CSR matrix (rows x k)
        dense: Dense matrix (k x cols)

    Returns:
        Dense float64 matrix (rows x cols)

    Raises:
        ValueError: If the inner dimensions do not match
    """
    if sparse.shape[1] != dense.shape[0]:
        raise ValueError(
            f"Dimension mismatch: sparse is {sparse.shape}, dense is {dense.shape}"
        )
    return np.asarray(sparse @ dense, dtype=np.float64)


def softmax_rows(matrix: np.ndarray) -> np.ndarray:
    """Row-wise softmax with max-subtraction."""
    shifted = matrix - matrix.max(axis=1, keepdims=True)
    exponentiated = np.exp(shifted)
    return exponentiated / exponentiated.sum(axis=1, keepdims=True)


def glorot_init(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """
    Glorot/Xavier uniform initialisation.

    Args:
        rows: Fan-in
        cols: Fan-out
        rng: Generator to draw from

    Returns:
        (rows x cols) matrix with entries uniform in +-sqrt(6 / (rows + cols))
    """
    if rows < 1 or cols < 1:
        raise ValueError(f"Shape must be positive, got ({rows}, {cols})")
    bound = np.sqrt(6.0 / (rows + cols))
    return rng.uniform(-bound, bound, size=(rows, cols))


def draw_dropout_mask(shape, rate: float, rng: np.random.Generator) -> np.ndarray:
    """
    Draw an inverted-dropout scale mask.

    Entries are 0 with probability `rate` and 1 / (1 - rate) otherwise.
    """
    if not 0.0 <= rate < 1.0:
        raise ValueError(f"Dropout rate must be in [0, 1), got {rate}")
    keep = rng.random(shape) >= rate
    return keep.astype(np.float64) / (1.0 - rate)


def dropout(
    matrix: np.ndarray,
    rate: float,
    rng: np.random.Generator,
    training: bool
) -> np.ndarray:
    """
    Inverted dropout.

    Args:
        matrix: Input matrix
        rate: Drop probability in [0, 1)
        rng: Generator used for the mask
        training: Inference mode returns the input unchanged

    Returns:
        Matrix with dropped entries zeroed and survivors scaled by 1 / (1 - rate)
    """
    if not 0.0 <= rate < 1.0:
        raise ValueError(f"Dropout rate must be in [0, 1), got {rate}")
    if not training or rate == 0.0:
        return matrix
    return matrix * draw_dropout_mask(matrix.shape, rate, rng)


def save_sparse(path: Path, matrix: sp.csr_matrix) -> None:
    """
    Write a sparse matrix in COO text format.

    Header line `rows cols nnz`, then one `row col value` triplet per line in
    row-major order, values printed with 17 significant digits.
    """
    csr = as_csr(matrix)
    coo = csr.tocoo()
    triplets = pd.DataFrame({"row": coo.row, "col": coo.col, "value": coo.data})
    with Path(path).open("w", encoding="utf-8", newline="") as handle:
        handle.write(f"{csr.shape[0]} {csr.shape[1]} {csr.nnz}\n")
        triplets.to_csv(
            handle, sep=" ", header=False, index=False,
            float_format=f"%{PRINT_PRECISION}", lineterminator="\n",
        )


def load_sparse(path: Path) -> sp.csr_matrix:
    """
    Read a sparse matrix written by save_sparse.

    Raises:
        FileNotFoundError: If the file does not exist
        ValueError: If the header or a triplet line is malformed
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Sparse matrix file not found: {path}")

    with path.open(encoding="utf-8") as handle:
        header = handle.readline().split()
        if len(header) != 3:
            raise ValueError(f"{path}:1: expected 'rows cols nnz' header")
        n_rows, n_cols, nnz = (int(x) for x in header)
        try:
            triplets = pd.read_csv(
                handle, sep=" ", header=None, names=["row", "col", "value"],
                dtype={"row": np.int64, "col": np.int64, "value": np.float64},
                float_precision="round_trip",
            )
        except pd.errors.EmptyDataError:
            triplets = pd.DataFrame({"row": [], "col": [], "value": []})
        except ValueError as e:
            raise ValueError(f"{path}: malformed triplet line: {e}") from e

    if len(triplets) != nnz:
        raise ValueError(f"{path}: header declares {nnz} entries, found {len(triplets)}")
    matrix = sp.coo_matrix(
        (
            triplets["value"].to_numpy(dtype=np.float64),
            (triplets["row"].to_numpy(dtype=np.int64), triplets["col"].to_numpy(dtype=np.int64)),
        ),
        shape=(n_rows, n_cols),
    )
    return as_csr(matrix)
