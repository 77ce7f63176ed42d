"""Zero fill-in incomplete LU and the smoothing sweeps built on it."""
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp
from numba import njit

from app.core.config import settings
from app.core.errors import DimensionError, FactorizationError
from app.linalg.sparse import SparseMatrix, as_csr


@njit(cache=True)
def _diagonal_pointers(indptr, indices):
    n = indptr.size - 1
    diag = np.full(n, -1, dtype=np.int64)
    for i in range(n):
        for kk in range(indptr[i], indptr[i + 1]):
            if indices[kk] == i:
                diag[i] = kk
                break
    return diag


@njit(cache=True)
def _ilu0_kernel(indptr, indices, data, diag, tol):
    # IKJ variant, in place on a copy of the CSR values; returns failing row or -1
    n = indptr.size - 1
    for i in range(n):
        row_end = indptr[i + 1]
        for kk in range(indptr[i], diag[i]):
            k = indices[kk]
            pivot = data[diag[k]]
            if abs(pivot) <= tol:
                return k
            data[kk] = data[kk] / pivot
            mult = data[kk]
            jj = kk + 1
            kp = diag[k] + 1
            k_end = indptr[k + 1]
            while jj < row_end and kp < k_end:
                cj = indices[jj]
                ck = indices[kp]
                if cj == ck:
                    data[jj] -= mult * data[kp]
                    jj += 1
                    kp += 1
                elif cj < ck:
                    jj += 1
                else:
                    kp += 1
        if abs(data[diag[i]]) <= tol:
            return i
    return -1


@njit(cache=True)
def _ilu0_solve(indptr, indices, data, diag, rhs):
    n = indptr.size - 1
    y = rhs.copy()
    for i in range(n):
        s = y[i]
        for kk in range(indptr[i], diag[i]):
            s -= data[kk] * y[indices[kk]]
        y[i] = s
    for i in range(n - 1, -1, -1):
        s = y[i]
        for kk in range(diag[i] + 1, indptr[i + 1]):
            s -= data[kk] * y[indices[kk]]
        y[i] = s / data[diag[i]]
    return y


@dataclass
class Ilu0Factors:
    """L (unit diagonal, implied) and U stored together on A's pattern."""

    indptr: np.ndarray
    indices: np.ndarray
    data: np.ndarray
    diag: np.ndarray
    n: int

    def solve(self, r: np.ndarray) -> np.ndarray:
        r = np.ascontiguousarray(r, dtype=np.float64)
        if r.size != self.n:
            raise DimensionError(f"vector of length {r.size} for ILU(0) of size {self.n}")
        return _ilu0_solve(self.indptr, self.indices, self.data, self.diag, r)

    def combined(self) -> SparseMatrix:
        return sp.csr_matrix((self.data, self.indices, self.indptr), shape=(self.n, self.n))

    def lower(self) -> SparseMatrix:
        return (sp.tril(self.combined(), k=-1) + sp.identity(self.n)).tocsr()

    def upper(self) -> SparseMatrix:
        return sp.triu(self.combined(), k=0).tocsr()


def ilu0_factor(A: SparseMatrix, pivot_tol: Optional[float] = None) -> Ilu0Factors:
    tol = settings.ZERO_PIVOT_TOL if pivot_tol is None else pivot_tol
    A = as_csr(A)
    n, m = A.shape
    if n != m:
        raise DimensionError(f"ILU(0) needs a square matrix, got {A.shape}")
    indptr = A.indptr.astype(np.int64)
    indices = A.indices.astype(np.int64)
    data = A.data.copy()
    diag = _diagonal_pointers(indptr, indices)
    missing = np.flatnonzero(diag < 0)
    if missing.size:
        raise FactorizationError("diagonal entry missing from sparsity pattern", row=int(missing[0]))
    failed = _ilu0_kernel(indptr, indices, data, diag, tol)
    if failed >= 0:
        raise FactorizationError("zero pivot in ILU(0)", row=int(failed))
    return Ilu0Factors(indptr=indptr, indices=indices, data=data, diag=diag, n=n)


def ilu0_smooth(
    A: SparseMatrix, fac: Ilu0Factors, x: np.ndarray, b: np.ndarray, n_s: int
) -> np.ndarray:
    """n_s sweeps of x <- x + (LU)^-1 (b - A x)."""
    if n_s < 0:
        raise ValueError("number of sweeps must be non-negative")
    x = np.array(x, dtype=np.float64, copy=True)
    b = np.asarray(b, dtype=np.float64)
    if A.shape[1] != x.size or A.shape[0] != b.size or fac.n != x.size:
        raise DimensionError("inconsistent dimensions in ILU(0) smoothing")
    for _ in range(n_s):
        x += fac.solve(b - A @ x)
    return x
