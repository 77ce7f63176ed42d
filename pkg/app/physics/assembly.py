"""Linearized system A p = f of the implicit Euler step.

A = C + D_rho^-1 T_rho, with C = diag(c dV) and T_rho the two-point flux
matrix weighted by face densities. Dirichlet faces enter through half-cell
transmissibilities, line-source cells through identity rows.
"""
from dataclasses import dataclass, field as dataclass_field
from functools import cached_property
from typing import List, Optional, Tuple

import numpy as np
import scipy.sparse as sp

from app.core.errors import ConfigurationError
from app.fields.generator import PermeabilityField
from app.linalg.norms import norm2
from app.linalg.sparse import SparseMatrix, as_csr, diagonal, from_triplets
from app.physics.model import (
    accumulation_coeff,
    characteristic_time,
    density,
    harmonic_mean,
    porosity,
)
from app.schemas.grid import FineGrid
from app.schemas.physics import (
    BoundarySpec,
    FaceName,
    FluidModel,
    ReferenceScales,
    RockModel,
)
from app.schemas.solver import AccumulationEvaluation


@dataclass
class SimState:
    p_n: np.ndarray
    p_nu: np.ndarray
    dt: float
    t: float = 0.0


@dataclass
class LinearSystem:
    A: SparseMatrix
    C: SparseMatrix
    f: np.ndarray
    p_nu: np.ndarray
    rho: np.ndarray
    c: np.ndarray
    c_nu: np.ndarray
    c_n: np.ndarray
    volume: np.ndarray
    # internal faces only, rows scaled by 1 / rho
    flux_weighted: SparseMatrix
    # internal faces only, rho = 1
    flux_unweighted: SparseMatrix
    constrained: np.ndarray

    @property
    def n(self) -> int:
        return self.f.size


@dataclass
class DirichletFace:
    cells: np.ndarray
    half_trans: np.ndarray
    value: float


def laplacian(left: np.ndarray, right: np.ndarray, trans: np.ndarray, n: int) -> SparseMatrix:
    rows = np.concatenate([left, right, left, right])
    cols = np.concatenate([right, left, left, right])
    vals = np.concatenate([-trans, -trans, trans, trans])
    return from_triplets(rows, cols, vals, (n, n))


_FACE_AXIS = {
    FaceName.WEST: (0, 0),
    FaceName.EAST: (0, -1),
    FaceName.SOUTH: (1, 0),
    FaceName.NORTH: (1, -1),
    FaceName.BOTTOM: (2, 0),
    FaceName.TOP: (2, -1),
}


@dataclass
class Problem:
    """Static description of one simulation: grid, rock, fluid, boundary."""

    grid: FineGrid
    field: PermeabilityField
    fluid: FluidModel = dataclass_field(default_factory=FluidModel)
    rock: RockModel = dataclass_field(default_factory=RockModel)
    boundary: BoundarySpec = dataclass_field(default_factory=BoundarySpec)
    reference: ReferenceScales = dataclass_field(default_factory=ReferenceScales)

    def __post_init__(self):
        self.field.check_grid(self.grid)
        self._constraints = self._line_source_cells()

    @property
    def n_cells(self) -> int:
        return self.grid.n_cells

    @property
    def is_linear(self) -> bool:
        return self.fluid.eta == 0 and self.rock.dphi_dp == 0

    @property
    def length(self) -> float:
        return self.reference.length or self.grid.lengths[0]

    @property
    def tau(self) -> float:
        return characteristic_time(self.fluid, self.rock, self.reference, self.length)

    @property
    def flux_scale(self) -> float:
        # tau * dp * K_ref, the factor carrying fluxes to nondimensional time
        return self.tau * self.reference.delta_p * self.reference.k_ref

    @cached_property
    def mobility(self) -> np.ndarray:
        return self.field.k / self.fluid.mu

    @cached_property
    def faces(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Interior face pairs (left, right) and their rho-free transmissibility."""
        g = self.grid
        lin = np.arange(g.n_cells).reshape(g.shape)
        lam = self.mobility.reshape(g.shape)
        geometry = (g.dy * g.dz / g.dx, g.dx * g.dz / g.dy, g.dx * g.dy / g.dz)
        lefts, rights, trans = [], [], []
        for axis, geom in zip((2, 1, 0), geometry):
            n = lin.shape[axis]
            if n < 2:
                continue
            lo = [slice(None)] * 3
            hi = [slice(None)] * 3
            lo[axis] = slice(0, n - 1)
            hi[axis] = slice(1, n)
            lefts.append(lin[tuple(lo)].ravel())
            rights.append(lin[tuple(hi)].ravel())
            trans.append(self.flux_scale * geom * harmonic_mean(lam[tuple(lo)], lam[tuple(hi)]).ravel())
        if not lefts:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty, np.zeros(0)
        return np.concatenate(lefts), np.concatenate(rights), np.concatenate(trans)

    @cached_property
    def flux_unweighted(self) -> SparseMatrix:
        left, right, trans = self.faces
        return laplacian(left, right, trans, self.n_cells)

    @cached_property
    def dirichlet_faces(self) -> List[DirichletFace]:
        g = self.grid
        lin = np.arange(g.n_cells).reshape(g.shape)
        spacing = (g.dx, g.dy, g.dz)
        areas = (g.dy * g.dz, g.dx * g.dz, g.dx * g.dy)
        out = []
        for face, value in self.boundary.faces.items():
            axis, end = _FACE_AXIS[FaceName(face)]
            # array axes run (k, j, i)
            sl = [slice(None)] * 3
            sl[2 - axis] = end
            cells = lin[tuple(sl)].ravel()
            half = self.flux_scale * areas[axis] / (0.5 * spacing[axis]) * self.mobility[cells]
            out.append(DirichletFace(cells=cells, half_trans=half, value=float(value)))
        return out

    def _line_source_cells(self) -> Tuple[np.ndarray, np.ndarray]:
        g = self.grid
        mask = np.zeros(g.n_cells, dtype=bool)
        values = np.zeros(g.n_cells)
        for src in self.boundary.line_sources:
            if src.i >= g.nx or src.j >= g.ny or src.k_min >= g.nz:
                raise ConfigurationError(f"line source column ({src.i}, {src.j}) lies outside the grid")
            k_max = g.nz - 1 if src.k_max is None else min(src.k_max, g.nz - 1)
            cells = src.i + g.nx * (src.j + g.ny * np.arange(src.k_min, k_max + 1))
            mask[cells] = True
            values[cells] = src.value
        if mask.any():
            on_faces = set()
            for face in self.dirichlet_faces:
                on_faces.update(face.cells[mask[face.cells]].tolist())
            if on_faces:
                raise ConfigurationError(
                    f"cell {min(on_faces)} carries both a face and a line-source Dirichlet condition"
                )
        return mask, values

    @property
    def constraints(self) -> Tuple[np.ndarray, np.ndarray]:
        return self._constraints

    def volumes(self) -> np.ndarray:
        return np.full(self.n_cells, self.grid.cell_volume)


def assemble(
    problem: Problem,
    state: SimState,
    c_evaluation: AccumulationEvaluation = AccumulationEvaluation.CURRENT,
) -> LinearSystem:
    fluid, rock = problem.fluid, problem.rock
    n = problem.n_cells
    p, p_n, dt = state.p_nu, state.p_n, state.dt
    dV = problem.volumes()

    rho = density(p, fluid)
    rho_n = density(p_n, fluid)
    c_nu = accumulation_coeff(p_n, p, dt, fluid, rock)
    c_n = accumulation_coeff(p_n, p_n, dt, fluid, rock)
    c = c_nu if c_evaluation == AccumulationEvaluation.CURRENT else c_n

    left, right, trans = problem.faces
    t_rho = laplacian(left, right, trans * 0.5 * (rho[left] + rho[right]), n)
    inv_rho = diagonal(1.0 / rho)
    flux_weighted = as_csr(inv_rho @ t_rho)

    boundary_diag = np.zeros(n)
    boundary_rhs = np.zeros(n)
    for face in problem.dirichlet_faces:
        rho_face = 0.5 * (rho[face.cells] + density(face.value, fluid))
        tb = face.half_trans * rho_face
        np.add.at(boundary_diag, face.cells, tb)
        np.add.at(boundary_rhs, face.cells, tb * face.value)

    b = -porosity(p, rock) / dt + porosity(p_n, rock) * rho_n / (dt * rho) + problem.boundary.source
    C = diagonal(c * dV)
    A = as_csr(C + flux_weighted + diagonal(boundary_diag / rho))
    f = b * dV + c * dV * p + boundary_rhs / rho

    mask, values = problem.constraints
    if mask.any():
        keep = diagonal((~mask).astype(np.float64))
        A = as_csr(keep @ A + diagonal(mask.astype(np.float64)))
        C = as_csr(keep @ C)
        f = np.where(mask, values, f)

    return LinearSystem(
        A=A,
        C=C,
        f=f,
        p_nu=np.array(p, copy=True),
        rho=rho,
        c=c,
        c_nu=c_nu,
        c_n=c_n,
        volume=dV,
        flux_weighted=flux_weighted,
        flux_unweighted=problem.flux_unweighted,
        constrained=mask,
    )


def residual(system: LinearSystem, p: np.ndarray) -> Tuple[np.ndarray, float]:
    r = system.f - system.A @ p
    return r, norm2(r)


def error_from_system(system: LinearSystem, p: Optional[np.ndarray] = None) -> np.ndarray:
    """Per-cell nonlinear error of a system assembled at the candidate itself."""
    p = system.p_nu if p is None else p
    r = system.f - system.A @ p
    return np.where(system.constrained, r, r / system.volume)


def nonlinear_error(
    problem: Problem,
    state: SimState,
    c_evaluation: AccumulationEvaluation = AccumulationEvaluation.CURRENT,
) -> Tuple[np.ndarray, float, LinearSystem]:
    """Mismatch of the discrete nonlinear step equation at ``state.p_nu``.

    Also returns the system assembled there so a caller can relinearize
    without assembling twice.
    """
    system = assemble(problem, state, c_evaluation)
    eps = error_from_system(system)
    return eps, norm2(eps), system
