"""Sparse direct LU (SuperLU, natural column order, partial pivoting)."""
import re
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import maximum_bipartite_matching
from scipy.sparse.linalg import splu, SuperLU

from app.core.config import settings
from app.core.errors import DimensionError, FactorizationError
from app.linalg.sparse import SparseMatrix, as_csr


@dataclass
class SparseLuFactors:
    """Pr * A * Pc = L * U."""

    lu: SuperLU
    n: int

    @property
    def L(self) -> sp.csc_matrix:
        return self.lu.L

    @property
    def U(self) -> sp.csc_matrix:
        return self.lu.U

    @property
    def perm_r(self) -> np.ndarray:
        return self.lu.perm_r

    @property
    def perm_c(self) -> np.ndarray:
        return self.lu.perm_c

    def row_permutation(self) -> sp.csc_matrix:
        return sp.csc_matrix((np.ones(self.n), (self.perm_r, np.arange(self.n))), shape=(self.n, self.n))

    def column_permutation(self) -> sp.csc_matrix:
        return sp.csc_matrix((np.ones(self.n), (np.arange(self.n), self.perm_c)), shape=(self.n, self.n))

    def solve(self, b: np.ndarray) -> np.ndarray:
        b = np.asarray(b, dtype=np.float64)
        if b.shape[0] != self.n:
            raise DimensionError(f"right-hand side has {b.shape[0]} rows, expected {self.n}")
        return self.lu.solve(b)


def sparse_lu_factor(A: SparseMatrix, pivot_tol: Optional[float] = None) -> SparseLuFactors:
    """Factorize a square sparse matrix.

    Raises FactorizationError naming the source row of the first pivot whose
    magnitude does not exceed ``pivot_tol``.
    """
    tol = settings.ZERO_PIVOT_TOL if pivot_tol is None else pivot_tol
    A = as_csr(A)
    n, m = A.shape
    if n != m:
        raise DimensionError(f"LU needs a square matrix, got {A.shape}")
    if n == 0:
        raise DimensionError("LU of an empty matrix")

    row_max = np.zeros(n)
    np.maximum.at(row_max, np.repeat(np.arange(n), np.diff(A.indptr)), np.abs(A.data))
    empty = np.flatnonzero(row_max <= tol)
    if empty.size:
        raise FactorizationError("matrix has a zero row", row=int(empty[0]))

    try:
        lu = splu(A.tocsc(), permc_spec="NATURAL", diag_pivot_thresh=1.0)
    except RuntimeError as exc:
        raise FactorizationError(f"sparse LU failed: {exc}", row=_singular_row(A, str(exc), tol)) from exc

    pivots = np.abs(lu.U.diagonal())
    small = np.flatnonzero(pivots <= tol)
    if small.size:
        # row k of Pr*A is source row inverse(perm_r)[k]
        source_rows = np.argsort(lu.perm_r)
        raise FactorizationError("zero pivot in sparse LU", row=int(source_rows[small[0]]))
    return SparseLuFactors(lu=lu, n=n)


def _singular_row(A: sp.csr_matrix, message: str, tol: float) -> Optional[int]:
    """Row left unmatched by a maximum matching of the pattern, else the SuperLU pivot index."""
    pattern = A.copy()
    pattern.data = (np.abs(pattern.data) > tol).astype(np.float64)
    pattern.eliminate_zeros()
    matched = maximum_bipartite_matching(pattern, perm_type="column")
    unmatched = np.flatnonzero(matched < 0)
    if unmatched.size:
        return int(unmatched[0])
    # SuperLU reports the 1-based column of the zero pivot; columns are in natural order
    found = re.search(r"(\d+)", message)
    if found and 0 < int(found.group(1)) <= A.shape[0]:
        return int(found.group(1)) - 1
    return None
