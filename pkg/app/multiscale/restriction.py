import numpy as np

from app.grid.hierarchy import GridHierarchy
from app.linalg.sparse import SparseMatrix, as_csr, from_triplets
from app.schemas.solver import RestrictionKind


def build_restriction_fv(hierarchy: GridHierarchy) -> SparseMatrix:
    """Indicator of primal blocks: R[i, j] = 1 iff fine cell j lies in block i."""
    n = hierarchy.n_fine
    return from_triplets(
        hierarchy.primal.block, np.arange(n), np.ones(n), (hierarchy.n_primal, n)
    )


def build_restriction_fe(P: SparseMatrix) -> SparseMatrix:
    return as_csr(P.T)


def build_restriction(kind: RestrictionKind, hierarchy: GridHierarchy, P: SparseMatrix) -> SparseMatrix:
    if kind == RestrictionKind.FV:
        return build_restriction_fv(hierarchy)
    return build_restriction_fe(P)
