import numpy as np

from app.grid.hierarchy import GridHierarchy
from app.linalg.sparse import SparseMatrix, as_csr


def changed_rows(old: SparseMatrix, new: SparseMatrix, threshold: float) -> np.ndarray:
    """Rows with some entry satisfying |new - old| > threshold * |old|."""
    old = as_csr(old)
    excess = as_csr(abs(as_csr(new) - old) - threshold * abs(old))
    rows = np.repeat(np.arange(excess.shape[0]), np.diff(excess.indptr))
    changed = np.zeros(excess.shape[0], dtype=bool)
    changed[rows[excess.data > 0]] = True
    return changed


def mark_dirty(old: SparseMatrix, new: SparseMatrix, hierarchy: GridHierarchy, threshold: float) -> np.ndarray:
    """Per dual block flag: some cell of its closed box has a changed row."""
    changed = changed_rows(old, new, threshold)
    if not changed.any():
        return np.zeros(hierarchy.n_dual, dtype=bool)
    return (hierarchy.dual.incidence @ changed.astype(np.float64)) > 0
