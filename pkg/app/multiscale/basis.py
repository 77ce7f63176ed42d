from typing import Tuple

from app.grid.hierarchy import GridHierarchy
from app.linalg.sparse import SparseMatrix, as_csr, diagonal
from app.multiscale.wirebasket import WirebasketSolver
from app.physics.assembly import LinearSystem
from app.schemas.solver import BasisVariant


def variant_operator(variant: BasisVariant, system: LinearSystem) -> SparseMatrix:
    """Local operator of a basis variant; internal faces only."""
    if variant == BasisVariant.B1:
        return as_csr(diagonal(system.c_nu * system.volume) + system.flux_weighted)
    if variant == BasisVariant.B2:
        return system.flux_weighted
    if variant == BasisVariant.B3:
        return as_csr(diagonal(system.c_n * system.volume) + system.flux_unweighted)
    return system.flux_unweighted


def build_basis(
    variant: BasisVariant, system: LinearSystem, hierarchy: GridHierarchy
) -> Tuple[SparseMatrix, WirebasketSolver]:
    """Full construction of the prolongation P (N_f x N_p)."""
    solver = WirebasketSolver(hierarchy)
    solver.factorize(variant_operator(variant, system))
    return solver.prolongation(), solver
