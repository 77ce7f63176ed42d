import numpy as np
import pytest

from app.grid.hierarchy import build_hierarchy
from app.linalg.lu import sparse_lu_factor
from app.multiscale import (
    MultiscaleOperators,
    build_basis,
    build_correction,
    build_restriction_fe,
    build_restriction_fv,
    changed_rows,
    mark_dirty,
    ms_apply,
    refresh,
    variant_operator,
)
from app.physics import Problem, SimState, assemble
from app.schemas.grid import CoarseningRatio, FineGrid
from app.schemas.solver import (
    AdaptivityPolicy,
    BasisVariant,
    CorrectionVariant,
    RestrictionKind,
    SolverConfig,
)

from conftest import homogeneous_field


def system_at(problem, p=None, p_n=None, dt=0.4):
    n = problem.n_cells
    p_n = np.zeros(n) if p_n is None else p_n
    return assemble(problem, SimState(p_n=p_n, p_nu=p_n if p is None else p, dt=dt))


def config(**kwargs):
    kwargs.setdefault("coarsening", CoarseningRatio.cube(4))
    return SolverConfig(**kwargs)


def test_fv_restriction_indicator(hierarchy8):
    R = build_restriction_fv(hierarchy8).toarray()
    assert R.shape == (8, 512)
    assert np.array_equal(R.sum(axis=0), np.ones(512))
    assert np.array_equal(R.sum(axis=1), np.full(8, 64.0))
    assert np.array_equal(np.argmax(R, axis=0), hierarchy8.primal.block)


@pytest.mark.parametrize("variant", list(BasisVariant))
def test_basis_is_kronecker_at_coarse_nodes(make_problem, hierarchy8, variant):
    system = system_at(make_problem(n=8, seed=1), p=np.full(512, 0.3))
    P, _ = build_basis(variant, system, hierarchy8)
    dense = P.toarray()
    nodes = hierarchy8.coarse_nodes
    assert np.array_equal(dense[nodes], np.eye(nodes.size))


@pytest.mark.parametrize("variant", [BasisVariant.B2, BasisVariant.B4])
def test_flux_only_bases_partition_unity(make_problem, hierarchy8, variant):
    system = system_at(make_problem(n=8, seed=2), p=np.linspace(0.0, 1.0, 512))
    P, _ = build_basis(variant, system, hierarchy8)
    assert np.allclose(P @ np.ones(P.shape[1]), 1.0, atol=1e-12)
    assert P.min() >= -1e-12


def test_accumulation_basis_sums_below_one(make_problem, hierarchy8):
    system = system_at(make_problem(n=8, seed=3))
    P, _ = build_basis(BasisVariant.B1, system, hierarchy8)
    sums = P @ np.ones(P.shape[1])
    assert np.all(sums <= 1.0 + 1e-12)
    assert sums.min() < 1.0 - 1e-6
    assert np.allclose(sums[hierarchy8.coarse_nodes], 1.0)


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(3))
def test_partition_of_unity_on_heterogeneous_fields(make_problem, seed):
    problem = make_problem(n=16, seed=40 + seed)
    hierarchy = build_hierarchy(problem.grid, CoarseningRatio.cube(4))
    system = system_at(problem, p=np.full(problem.n_cells, 0.4))
    for variant in (BasisVariant.B2, BasisVariant.B4):
        P, _ = build_basis(variant, system, hierarchy)
        assert np.abs(P @ np.ones(P.shape[1]) - 1.0).max() <= 1e-12
    P, _ = build_basis(BasisVariant.B1, system, hierarchy)
    sums = P @ np.ones(P.shape[1])
    interior = np.setdiff1d(np.arange(problem.n_cells), hierarchy.coarse_nodes)
    assert sums[interior].max() < 1.0
    assert sums[interior].min() >= 0.0


def test_homogeneous_1d_basis_is_piecewise_linear():
    grid = FineGrid(nx=8, ny=1, nz=1)
    hierarchy = build_hierarchy(grid, CoarseningRatio(cx=4, cy=1, cz=1))
    system = system_at(Problem(grid=grid, field=homogeneous_field(grid)))
    P, _ = build_basis(BasisVariant.B4, system, hierarchy)
    expected = np.array(
        [
            [1.0, 0.0],
            [1.0, 0.0],
            [0.75, 0.25],
            [0.5, 0.5],
            [0.25, 0.75],
            [0.0, 1.0],
            [0.0, 1.0],
            [0.0, 1.0],
        ]
    )
    assert np.allclose(P.toarray(), expected, atol=1e-13)


def test_unit_coarsening_gives_identity_prolongation():
    grid = FineGrid(nx=4, ny=4, nz=4)
    hierarchy = build_hierarchy(grid, CoarseningRatio.cube(1))
    system = system_at(Problem(grid=grid, field=homogeneous_field(grid)))
    P, _ = build_basis(BasisVariant.B4, system, hierarchy)
    assert np.array_equal(P.toarray(), np.eye(64))


def test_basis_solves_the_reduced_operator(make_problem, hierarchy8):
    system = system_at(make_problem(n=8, seed=4), p=np.full(512, 0.5))
    P, solver = build_basis(BasisVariant.B2, system, hierarchy8)
    reduced = solver.dense_reduced_operator(variant_operator(BasisVariant.B2, system))
    out = reduced @ P.toarray()
    selector = np.zeros_like(out)
    selector[hierarchy8.coarse_nodes, np.arange(8)] = 1.0
    assert np.allclose(out, selector, atol=1e-11)


@pytest.mark.parametrize("restriction", list(RestrictionKind))
def test_multiscale_stage_zeroes_the_restricted_residual(make_problem, hierarchy8, rng, restriction):
    system = system_at(make_problem(n=8, seed=5))
    ops = MultiscaleOperators(hierarchy8, config(restriction=restriction))
    refresh(ops, system)
    r = rng.standard_normal(512)
    delta = ops.apply(r)
    R = ops.R
    assert np.abs(R @ (r - system.A @ delta)).max() <= 1e-10 * np.abs(R @ r).max()
    assert ops.coarse_residual(r, delta) <= 1e-10 * np.abs(R @ r).max()
    assert np.allclose(delta, ms_apply(ops.P, R, ops.coarse, r))


def test_fe_coarse_operator_is_spd_for_incompressible_flow(make_problem, hierarchy8):
    system = system_at(make_problem(n=8, seed=6, eta=0.0))
    P, _ = build_basis(BasisVariant.B4, system, hierarchy8)
    R = build_restriction_fe(P)
    coarse = (R @ system.A @ P).toarray()
    assert np.allclose(coarse, coarse.T, rtol=1e-12, atol=1e-14 * np.abs(coarse).max())
    assert np.linalg.eigvalsh(0.5 * (coarse + coarse.T)).min() > 0


def test_changed_rows_threshold(make_problem, rng):
    problem = make_problem(n=8, seed=7)
    old = variant_operator(BasisVariant.B2, system_at(problem, p=np.full(512, 0.2)))
    assert not changed_rows(old, old, 0.0).any()
    p = np.full(512, 0.2)
    p[0] = 0.9
    new = variant_operator(BasisVariant.B2, system_at(problem, p=p))
    rows = changed_rows(old, new, 0.0)
    assert rows[0] and rows[1] and rows[8] and rows[64]
    assert not rows[300]
    assert not changed_rows(old, new, 10.0).any()


def test_mark_dirty_flags_boxes_holding_a_changed_row(make_problem, hierarchy8):
    problem = make_problem(n=8, seed=8)
    old = variant_operator(BasisVariant.B2, system_at(problem, p=np.full(512, 0.2)))
    assert not mark_dirty(old, old, hierarchy8, 0.0).any()

    p = np.full(512, 0.2)
    p[0] = 0.9
    new = variant_operator(BasisVariant.B2, system_at(problem, p=p))
    flags = mark_dirty(old, new, hierarchy8, 0.0)
    changed = changed_rows(old, new, 0.0)
    incidence = hierarchy8.dual.incidence.toarray()
    assert np.array_equal(flags, incidence[:, changed].any(axis=1))
    assert flags[hierarchy8.dual.block[0]]
    assert not flags.all()


def test_incremental_refresh_matches_full_rebuild(make_problem, hierarchy8):
    problem = make_problem(n=8, seed=9)
    cfg = config(basis_variant=BasisVariant.B2, adaptivity=AdaptivityPolicy(threshold=0.0))
    ops = MultiscaleOperators(hierarchy8, cfg)
    first = system_at(problem, p=np.full(512, 0.2))
    assert refresh(ops, first, step_key=0) == hierarchy8.n_dual
    full_solves = ops.local_solves

    p = np.full(512, 0.2)
    p[:3] = [0.5, 0.7, 0.9]
    second = system_at(problem, p=p)
    refreshed = refresh(ops, second, step_key=0)
    assert 0 < refreshed < hierarchy8.n_dual
    assert ops.local_solves - full_solves < full_solves

    rebuilt, _ = build_basis(BasisVariant.B2, second, hierarchy8)
    assert np.allclose(ops.P.toarray(), rebuilt.toarray(), rtol=0.0, atol=1e-13)


def test_unchanged_operator_costs_no_local_solves(make_problem, hierarchy8):
    problem = make_problem(n=8, seed=10)
    system = system_at(problem, p=np.full(512, 0.4))
    for variant in (BasisVariant.B2, BasisVariant.B4):
        ops = MultiscaleOperators(hierarchy8, config(basis_variant=variant))
        refresh(ops, system, step_key=0)
        before = ops.local_solves
        P = ops.P.copy()
        assert refresh(ops, system, step_key=1) == 0
        assert ops.local_solves == before
        assert (ops.P != P).nnz == 0


def test_static_basis_is_kept_within_a_step(make_problem, hierarchy8):
    problem = make_problem(n=8, seed=11)
    ops = MultiscaleOperators(hierarchy8, config(basis_variant=BasisVariant.B3))
    refresh(ops, system_at(problem, p=np.full(512, 0.1)), step_key=0)
    before = ops.local_solves
    refresh(ops, system_at(problem, p=np.full(512, 0.8)), step_key=0)
    assert ops.local_solves == before
    assert not ops.dirty.any()


def test_correction_functions(make_problem, hierarchy8, rng):
    system = system_at(make_problem(n=8, seed=12))
    rhs = rng.standard_normal(512)
    assert not build_correction(CorrectionVariant.NONE, rhs, None).any()

    ops = MultiscaleOperators(hierarchy8, config(correction=CorrectionVariant.CF4))
    refresh(ops, system)
    psi = ops.correction(rhs)
    assert np.all(psi[hierarchy8.coarse_nodes] == 0.0)
    assert np.any(psi)
    assert not ops.correction(np.zeros(512)).any()

    # the same local factors as the basis: psi solves the reduced operator
    M = variant_operator(BasisVariant.B4, system)
    reduced = ops.basis_solver.dense_reduced_operator(M)
    target = rhs.copy()
    target[hierarchy8.coarse_nodes] = 0.0
    assert np.allclose(reduced @ psi, target, atol=1e-10 * np.abs(rhs).max())


def test_correction_with_its_own_operator(make_problem, hierarchy8, rng):
    system = system_at(make_problem(n=8, seed=13), p=np.full(512, 0.6))
    ops = MultiscaleOperators(hierarchy8, config(correction=CorrectionVariant.CF2))
    refresh(ops, system)
    rhs = rng.standard_normal(512)
    psi = ops.correction(rhs)
    _, own = build_basis(BasisVariant.B2, system, hierarchy8)
    assert np.allclose(psi, own.apply(rhs))
    assert not np.allclose(psi, ops.basis_solver.apply(rhs))


def test_fv_sweep_is_locally_conservative_on_coarse_blocks(make_problem, hierarchy8):
    system = system_at(make_problem(n=8, seed=14))
    ops = MultiscaleOperators(hierarchy8, config(restriction=RestrictionKind.FE))
    refresh(ops, system)
    p = ops.fv_sweep(system, np.zeros(512))
    R = build_restriction_fv(hierarchy8)
    assert np.abs(R @ (system.f - system.A @ p)).max() <= 1e-10 * np.abs(R @ system.f).max()


def test_coarse_factorization_matches_dense(make_problem, hierarchy8, rng):
    system = system_at(make_problem(n=8, seed=15))
    ops = MultiscaleOperators(hierarchy8, config())
    refresh(ops, system)
    b = rng.standard_normal(8)
    dense = ops.coarse_matrix().toarray()
    assert np.allclose(sparse_lu_factor(ops.coarse_matrix()).solve(b), np.linalg.solve(dense, b))


def test_operator_dump(make_problem, hierarchy8, tmp_path):
    ops = MultiscaleOperators(hierarchy8, config())
    refresh(ops, system_at(make_problem(n=8, seed=16)))
    ops.dump(tmp_path / "ops", prefix="step1_")
    for name in ("step1_P.mtx", "step1_R.mtx", "step1_coarse.mtx"):
        assert (tmp_path / "ops" / name).is_file()
