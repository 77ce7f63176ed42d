"""Prolongation, restriction and coarse factorization kept current across iterations."""
from pathlib import Path
from typing import Hashable, Optional, Union

import numpy as np

from app.core.logger import RunLog, create_log, get_logger
from app.grid.hierarchy import GridHierarchy
from app.linalg.lu import SparseLuFactors, sparse_lu_factor
from app.linalg.norms import norm_inf
from app.linalg.sparse import SparseMatrix, as_csr, diagonal, write_matrix_market
from app.multiscale.adaptivity import mark_dirty
from app.multiscale.basis import variant_operator
from app.multiscale.correction import build_correction
from app.multiscale.restriction import build_restriction, build_restriction_fv
from app.multiscale.wirebasket import WirebasketSolver
from app.physics.assembly import LinearSystem
from app.schemas.solver import BasisVariant, RestrictionKind, SolverConfig
from app.schemas.solver_event import EventStage, EventType

logger = get_logger(__name__)


def ms_apply(P: SparseMatrix, R: SparseMatrix, coarse: SparseLuFactors, r: np.ndarray) -> np.ndarray:
    """delta = P (R A P)^-1 R r."""
    return P @ coarse.solve(R @ r)


def _merge_rows(old: SparseMatrix, new: SparseMatrix, mask: np.ndarray) -> SparseMatrix:
    keep_new = diagonal(mask.astype(np.float64))
    keep_old = diagonal((~mask).astype(np.float64))
    return as_csr(keep_new @ new + keep_old @ old)


class _AdaptiveLocalOperator:
    """Local factors of one variant operator plus the snapshot they were built from."""

    def __init__(self, hierarchy: GridHierarchy, variant: BasisVariant, threshold: float):
        self.hierarchy = hierarchy
        self.variant = variant
        self.threshold = threshold
        self.solver = WirebasketSolver(hierarchy)
        self.source: Optional[SparseMatrix] = None
        self.step_key: Optional[Hashable] = None

    def update(self, system: LinearSystem, step_key: Hashable) -> Optional[np.ndarray]:
        """Refactorize flagged dual blocks; returns the flags, None when skipped."""
        if (
            self.source is not None
            and not self.variant.pressure_dependent
            and step_key == self.step_key
        ):
            return None
        self.step_key = step_key
        M = variant_operator(self.variant, system)
        if self.source is None:
            flags = np.ones(self.hierarchy.n_dual, dtype=bool)
            self.solver.factorize(M)
            self.source = as_csr(M)
            return flags
        flags = mark_dirty(self.source, M, self.hierarchy, self.threshold)
        if flags.any():
            owners = np.flatnonzero(flags)
            self.solver.factorize(M, owners)
            owned = np.isin(self.hierarchy.dual.block, owners)
            self.source = _merge_rows(self.source, M, owned)
        return flags


class MultiscaleOperators:
    def __init__(self, hierarchy: GridHierarchy, config: SolverConfig, run_log: Optional[RunLog] = None):
        self.hierarchy = hierarchy
        self.config = config
        self.run_log = run_log
        threshold = config.adaptivity.threshold
        self._basis = _AdaptiveLocalOperator(hierarchy, config.basis_variant, threshold)
        cf_variant = config.correction.operator
        if cf_variant is None:
            self._correction = None
        elif cf_variant == config.basis_variant:
            self._correction = self._basis
        else:
            self._correction = _AdaptiveLocalOperator(hierarchy, cf_variant, threshold)
        self.R_fv = build_restriction_fv(hierarchy)
        self.P: Optional[SparseMatrix] = None
        self.R: Optional[SparseMatrix] = None
        self.A: Optional[SparseMatrix] = None
        self.coarse: Optional[SparseLuFactors] = None
        self.dirty = np.zeros(hierarchy.n_dual, dtype=bool)
        self.refreshed_blocks = 0

    @property
    def basis_source(self) -> Optional[SparseMatrix]:
        return self._basis.source

    @property
    def basis_solver(self) -> WirebasketSolver:
        return self._basis.solver

    @property
    def local_solves(self) -> int:
        total = self._basis.solver.local_solves
        if self._correction is not None and self._correction is not self._basis:
            total += self._correction.solver.local_solves
        return total

    def update_basis(self, system: LinearSystem, step_key: Hashable = None) -> int:
        """Refresh flagged basis functions; returns the number of refreshed dual blocks."""
        flags = self._basis.update(system, step_key)
        refreshed = 0
        if flags is None:
            self.dirty[:] = False
        else:
            self.dirty = flags
            refreshed = int(flags.sum())
            if refreshed or self.P is None:
                owners = None if self.P is None else np.flatnonzero(flags)
                self.P = self._basis.solver.prolongation(owners)
        if self._correction is not None and self._correction is not self._basis:
            self._correction.update(system, step_key)
        self.refreshed_blocks += refreshed
        create_log(
            EventStage.BASIS,
            EventType.REFRESH,
            f"{refreshed} of {self.hierarchy.n_dual} dual blocks refreshed",
            run_log=self.run_log,
            metadata={"refreshed": refreshed},
        )
        return refreshed

    def update_coarse(self, system: LinearSystem) -> None:
        self.A = system.A
        self.R = build_restriction(self.config.restriction, self.hierarchy, self.P)
        self.coarse = sparse_lu_factor(self.coarse_matrix())

    def update(self, system: LinearSystem, step_key: Hashable = None) -> int:
        refreshed = self.update_basis(system, step_key)
        self.update_coarse(system)
        return refreshed

    def coarse_matrix(self, R: Optional[SparseMatrix] = None) -> SparseMatrix:
        R = self.R if R is None else R
        return as_csr(R @ self.A @ self.P)

    def apply(self, r: np.ndarray) -> np.ndarray:
        return ms_apply(self.P, self.R, self.coarse, r)

    def coarse_residual(self, r: np.ndarray, delta: np.ndarray) -> float:
        return norm_inf(self.R @ (r - self.A @ delta))

    def correction(self, r: np.ndarray) -> np.ndarray:
        solver = None if self._correction is None else self._correction.solver
        return build_correction(self.config.correction, r, solver)

    def fv_sweep(self, system: LinearSystem, p: np.ndarray) -> np.ndarray:
        """One multiscale stage with the finite-volume restriction."""
        coarse = sparse_lu_factor(as_csr(self.R_fv @ system.A @ self.P))
        r = system.f - system.A @ p
        return p + ms_apply(self.P, self.R_fv, coarse, r)

    def dump(self, directory: Union[str, Path], prefix: str = "") -> None:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        write_matrix_market(directory / f"{prefix}P.mtx", self.P, comment="prolongation")
        write_matrix_market(directory / f"{prefix}R.mtx", self.R, comment="restriction")
        write_matrix_market(directory / f"{prefix}coarse.mtx", self.coarse_matrix(), comment="R A P")


def refresh(operators: MultiscaleOperators, system: LinearSystem, step_key: Hashable = None) -> int:
    """Adaptive update of P followed by the coarse refactorization."""
    return operators.update(system, step_key)
