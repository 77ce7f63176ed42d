"""Algebraic wirebasket construction of basis and correction functions.

The fine operator is reduced row by row: couplings to cells of a higher
class (interior < face < edge < vertex) become boundary data, couplings to
cells of the same class and the same dual block stay in the local problem,
everything else is lumped onto the diagonal. Local problems are grouped per
(dual block, class) and solved edges first, then faces, then interiors.
"""
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional

import numpy as np
import scipy.sparse as sp

from app.core.errors import FactorizationError, LocalSolveError
from app.core.logger import get_logger
from app.grid.hierarchy import CellCategory, GridHierarchy
from app.linalg.lu import SparseLuFactors, sparse_lu_factor
from app.linalg.sparse import SparseMatrix, as_csr, from_triplets

logger = get_logger(__name__)

PHASES = (CellCategory.EDGE, CellCategory.FACE, CellCategory.INTERIOR)


@dataclass
class LocalGroup:
    owner: int
    category: CellCategory
    cells: np.ndarray
    lu: Optional[SparseLuFactors] = None
    # rows of the reduced operator coupling this group to higher classes
    coupling: Optional[SparseMatrix] = None
    columns: Optional[np.ndarray] = None
    values: Optional[np.ndarray] = None


def reduce_operator(M: SparseMatrix, category: np.ndarray, owner: np.ndarray):
    """Split M into the lumped local operator and the higher-class coupling."""
    M = as_csr(M)
    n = M.shape[0]
    rows = np.repeat(np.arange(n), np.diff(M.indptr))
    cols = M.indices
    vals = M.data
    off = rows != cols
    same = off & (category[cols] == category[rows]) & (owner[cols] == owner[rows])
    higher = off & (category[cols] > category[rows])
    lump = off & ~same & ~higher
    diag = M.diagonal() + np.bincount(rows[lump], weights=vals[lump], minlength=n)
    idx = np.arange(n)
    local = from_triplets(
        np.concatenate([rows[same], idx]),
        np.concatenate([cols[same], idx]),
        np.concatenate([vals[same], diag]),
        (n, n),
    )
    coupling = from_triplets(rows[higher], cols[higher], vals[higher], (n, n))
    return local, coupling


class WirebasketSolver:
    def __init__(self, hierarchy: GridHierarchy):
        self.hierarchy = hierarchy
        self.category = hierarchy.category.astype(np.int64)
        self.owner = hierarchy.dual.block
        self.groups: List[LocalGroup] = []
        self.by_owner: Dict[int, List[int]] = {}
        self.by_phase: Dict[CellCategory, List[int]] = {}
        for cat in PHASES:
            cells = np.flatnonzero(self.category == cat)
            order = np.argsort(self.owner[cells], kind="stable")
            cells = cells[order]
            owners, starts = np.unique(self.owner[cells], return_index=True)
            bounds = list(starts) + [cells.size]
            ids = []
            for owner, lo, hi in zip(owners, bounds[:-1], bounds[1:]):
                self.groups.append(LocalGroup(owner=int(owner), category=cat, cells=cells[lo:hi]))
                gid = len(self.groups) - 1
                ids.append(gid)
                self.by_owner.setdefault(int(owner), []).append(gid)
            self.by_phase[cat] = ids
        self.local_solves = 0
        self.correction_solves = 0

    @property
    def n_fine(self) -> int:
        return self.hierarchy.n_fine

    @property
    def n_coarse(self) -> int:
        return self.hierarchy.n_primal

    def _selected(self, owners: Optional[Iterable[int]]) -> set:
        if owners is None:
            return set(range(len(self.groups)))
        out = set()
        for owner in owners:
            out.update(self.by_owner.get(int(owner), []))
        return out

    def factorize(self, M: SparseMatrix, owners: Optional[Iterable[int]] = None) -> None:
        """(Re)factorize the local problems of the given dual blocks (all if None)."""
        local, coupling = reduce_operator(M, self.category, self.owner)
        for gid in sorted(self._selected(owners)):
            group = self.groups[gid]
            sub = local[group.cells][:, group.cells]
            try:
                group.lu = sparse_lu_factor(sub)
            except FactorizationError as exc:
                raise LocalSolveError(group.owner, group.category.name.lower(), exc) from exc
            group.coupling = coupling[group.cells]

    def _assemble(self) -> SparseMatrix:
        nodes = self.hierarchy.coarse_nodes
        rows = [nodes]
        cols = [np.arange(nodes.size)]
        vals = [np.ones(nodes.size)]
        for group in self.groups:
            if group.values is None or group.columns.size == 0:
                continue
            rows.append(np.repeat(group.cells, group.columns.size))
            cols.append(np.tile(group.columns, group.cells.size))
            vals.append(group.values.ravel())
        P = from_triplets(
            np.concatenate(rows), np.concatenate(cols), np.concatenate(vals), (self.n_fine, self.n_coarse)
        )
        P.eliminate_zeros()
        return P

    def prolongation(self, owners: Optional[Iterable[int]] = None) -> SparseMatrix:
        """Solve the selected local basis problems and return the assembled P."""
        selected = self._selected(owners)
        P = self._assemble()
        for cat in PHASES:
            touched = False
            for gid in self.by_phase[cat]:
                if gid not in selected:
                    continue
                group = self.groups[gid]
                rhs = as_csr(-(group.coupling @ P))
                rhs.eliminate_zeros()
                columns = np.unique(rhs.indices)
                if columns.size:
                    values = group.lu.solve(rhs[:, columns].toarray())
                else:
                    values = np.zeros((group.cells.size, 0))
                group.columns = columns
                group.values = np.asarray(values).reshape(group.cells.size, columns.size)
                self.local_solves += 1
                touched = True
            if touched:
                P = self._assemble()
        return P

    def apply(self, rhs: np.ndarray) -> np.ndarray:
        """Hierarchical local solve with zero values at coarse nodes."""
        psi = np.zeros(self.n_fine)
        for cat in PHASES:
            for gid in self.by_phase[cat]:
                group = self.groups[gid]
                local_rhs = rhs[group.cells] - group.coupling @ psi
                psi[group.cells] = group.lu.solve(local_rhs)
                self.correction_solves += 1
        return psi

    def dense_reduced_operator(self, M: SparseMatrix) -> np.ndarray:
        """Block-triangular reduced operator with identity vertex rows, for checks."""
        local, coupling = reduce_operator(M, self.category, self.owner)
        out = (local + coupling).toarray()
        for node in self.hierarchy.coarse_nodes:
            out[node, :] = 0.0
            out[node, node] = 1.0
        return out
