"""CSR storage helpers.

``SparseMatrix`` is scipy's CSR matrix kept in canonical form: sorted column
indices, no duplicate entries, float64 values.
"""
from pathlib import Path
from typing import Sequence, Tuple, Union

import numpy as np
import scipy.io
import scipy.sparse as sp

from app.core.errors import DimensionError, ResultIOError

SparseMatrix = sp.csr_matrix


def as_csr(A) -> SparseMatrix:
    A = sp.csr_matrix(A, dtype=np.float64)
    A.sum_duplicates()
    A.sort_indices()
    return A


def from_triplets(
    rows: Sequence[int], cols: Sequence[int], values: Sequence[float], shape: Tuple[int, int]
) -> SparseMatrix:
    """Build a CSR matrix, summing duplicate (row, col) pairs."""
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    values = np.asarray(values, dtype=np.float64)
    if not (rows.shape == cols.shape == values.shape):
        raise DimensionError("triplet arrays differ in length")
    if rows.size and (rows.min() < 0 or rows.max() >= shape[0]):
        raise DimensionError(f"row index out of range for shape {shape}")
    if cols.size and (cols.min() < 0 or cols.max() >= shape[1]):
        raise DimensionError(f"column index out of range for shape {shape}")
    return as_csr(sp.coo_matrix((values, (rows, cols)), shape=shape))


def identity(n: int) -> SparseMatrix:
    return as_csr(sp.identity(n, format="csr"))


def diagonal(values) -> SparseMatrix:
    values = np.asarray(values, dtype=np.float64)
    return as_csr(sp.diags(values, 0, shape=(values.size, values.size)))


def to_dense(A: SparseMatrix) -> np.ndarray:
    return np.asarray(A.toarray(), dtype=np.float64)


def check_structure(A: SparseMatrix) -> None:
    """Raise if A violates the canonical CSR invariants."""
    n_rows, n_cols = A.shape
    indptr, indices = A.indptr, A.indices
    if indptr.size != n_rows + 1 or indptr[0] != 0:
        raise DimensionError("row offsets must have n_rows + 1 entries starting at 0")
    if np.any(np.diff(indptr) < 0):
        raise DimensionError("row offsets must be non-decreasing")
    if indices.size and (indices.min() < 0 or indices.max() >= n_cols):
        raise DimensionError("column index out of range")
    steps = np.diff(indices)
    same_row = np.repeat(np.arange(n_rows), np.diff(indptr))
    inside = same_row[1:] == same_row[:-1]
    if np.any(steps[inside] <= 0):
        raise DimensionError("column indices must be strictly increasing within a row")


def spmv(A: SparseMatrix, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or A.shape[1] != x.size:
        raise DimensionError(f"cannot multiply {A.shape} matrix with vector of length {x.size}")
    return A @ x


def same_pattern(A: SparseMatrix, B: SparseMatrix) -> bool:
    return (
        A.shape == B.shape
        and np.array_equal(A.indptr, B.indptr)
        and np.array_equal(A.indices, B.indices)
    )


def write_matrix_market(path: Union[str, Path], A: SparseMatrix, comment: str = "") -> None:
    """Coordinate-format export (1-based indices)."""
    try:
        scipy.io.mmwrite(str(path), sp.coo_matrix(A), comment=comment, field="real", precision=17)
    except OSError as exc:
        raise ResultIOError(f"cannot write {path}: {exc}") from exc


def read_matrix_market(path: Union[str, Path]) -> SparseMatrix:
    return as_csr(scipy.io.mmread(str(path)))
