import numpy as np
import pytest
import scipy.linalg
import scipy.sparse as sp

from app.core.errors import DimensionError, FactorizationError
from app.linalg import (
    check_structure,
    diagonal,
    from_triplets,
    identity,
    ilu0_factor,
    ilu0_smooth,
    norm2,
    norm_inf,
    read_matrix_market,
    same_pattern,
    sparse_lu_factor,
    spmv,
    to_dense,
    write_matrix_market,
)
from app.linalg.lu import _singular_row


def tridiagonal(n):
    return sp.diags([-np.ones(n - 1), 2 * np.ones(n), -np.ones(n - 1)], [-1, 0, 1], format="csr")


def laplacian_2d(m):
    t = tridiagonal(m)
    eye = sp.identity(m)
    return sp.csr_matrix(sp.kron(eye, t) + sp.kron(t, eye))


def random_sparse(rng, n, density=0.3, shift=None):
    dense = rng.standard_normal((n, n)) * (rng.random((n, n)) < density)
    if shift is not None:
        dense += shift * np.eye(n)
    return dense


def test_spmv_identity():
    assert np.array_equal(spmv(identity(3), np.array([1.0, 2.0, 3.0])), [1.0, 2.0, 3.0])


def test_spmv_zero_matrix(rng):
    Z = from_triplets([], [], [], (4, 4))
    assert np.array_equal(spmv(Z, rng.standard_normal(4)), np.zeros(4))


def test_spmv_matches_dense_loop(rng):
    dense = random_sparse(rng, 10)
    x = rng.standard_normal(10)
    rows, cols = np.nonzero(dense)
    A = from_triplets(rows, cols, dense[rows, cols], (10, 10))
    expected = np.zeros(10)
    for i in range(10):
        for j in range(10):
            expected[i] += dense[i, j] * x[j]
    assert np.allclose(spmv(A, x), expected, rtol=0, atol=1e-14)


def test_spmv_dimension_mismatch():
    with pytest.raises(DimensionError):
        spmv(identity(3), np.ones(4))


def test_triplets_round_trip(rng):
    for _ in range(5):
        dense = random_sparse(rng, 8)
        rows, cols = np.nonzero(dense)
        A = from_triplets(rows, cols, dense[rows, cols], (8, 8))
        check_structure(A)
        assert np.array_equal(to_dense(A), dense)


def test_triplets_sum_duplicates_and_check_range():
    A = from_triplets([0, 0, 1], [1, 1, 0], [1.0, 2.0, 5.0], (2, 2))
    assert A[0, 1] == 3.0
    check_structure(A)
    with pytest.raises(DimensionError):
        from_triplets([2], [0], [1.0], (2, 2))


def test_lu_of_diagonal():
    fac = sparse_lu_factor(diagonal([2.0, 4.0]))
    assert np.allclose(fac.L.toarray(), np.eye(2))
    assert np.allclose(fac.U.toarray(), np.diag([2.0, 4.0]))


def test_lu_tridiagonal_matches_dense_elimination():
    A = tridiagonal(5)
    b = np.eye(5)[0]
    x = sparse_lu_factor(A).solve(b)
    assert np.allclose(x, np.linalg.solve(A.toarray(), b), rtol=1e-12, atol=0)


def test_lu_reproduces_permuted_matrix(rng):
    dense = random_sparse(rng, 12, shift=4.0)
    A = sp.csr_matrix(dense)
    fac = sparse_lu_factor(A)
    lhs = (fac.row_permutation() @ A @ fac.column_permutation()).toarray()
    assert np.allclose(lhs, (fac.L @ fac.U).toarray(), atol=1e-12)


def test_lu_random_systems_against_dense_oracle(rng):
    for _ in range(5):
        dense = random_sparse(rng, 20, shift=6.0)
        b = rng.standard_normal(20)
        x = sparse_lu_factor(sp.csr_matrix(dense)).solve(b)
        oracle = scipy.linalg.solve(dense, b)
        assert norm2(x - oracle) <= 1e-12 * norm2(oracle)


def test_lu_zero_row_names_the_row():
    A = sp.csr_matrix(np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 1.0, 2.0]]))
    with pytest.raises(FactorizationError) as info:
        sparse_lu_factor(A)
    assert info.value.row == 1
    assert info.value.exit_code == 3


def test_lu_structurally_singular_matrix_names_a_row():
    A = sp.csr_matrix(np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 3.0, 0.0]]))
    with pytest.raises(FactorizationError) as info:
        sparse_lu_factor(A)
    assert info.value.row in (1, 2)


def test_singular_row_falls_back_to_the_reported_pivot():
    A = sp.csr_matrix(np.array([[1.0, 1.0], [1.0, 1.0]]))
    assert _singular_row(A, "Factor is exactly singular at column 2", 0.0) == 1
    assert _singular_row(A, "Factor is exactly singular", 0.0) is None


def test_ilu0_diagonal_is_exact(rng):
    A = diagonal([1.0, 2.0, 5.0, 10.0])
    fac = ilu0_factor(A)
    b = rng.standard_normal(4)
    assert np.allclose(fac.solve(b), b / np.array([1.0, 2.0, 5.0, 10.0]))


def test_ilu0_tridiagonal_equals_exact_lu():
    A = tridiagonal(6)
    fac = ilu0_factor(A)
    assert np.allclose((fac.lower() @ fac.upper()).toarray(), A.toarray(), atol=1e-14)
    P, L, U = scipy.linalg.lu(A.toarray())
    assert np.allclose(P, np.eye(6))
    assert np.allclose(fac.upper().toarray(), U, atol=1e-14)


def test_ilu0_keeps_the_pattern():
    A = laplacian_2d(4)
    fac = ilu0_factor(A)
    assert same_pattern(fac.combined(), A)


def test_ilu0_laplacian_is_approximate_but_reduces_residual(rng):
    A = laplacian_2d(4)
    fac = ilu0_factor(A)
    assert np.abs((fac.lower() @ fac.upper() - A).toarray()).max() > 0
    b = rng.standard_normal(16)
    x = fac.solve(b)
    assert norm2(b - A @ x) < norm2(b)


def test_ilu0_zero_pivot_names_the_row():
    A = sp.csr_matrix(np.array([[1.0, 1.0], [1.0, 1.0]]))
    with pytest.raises(FactorizationError) as info:
        ilu0_factor(A)
    assert info.value.row == 1


def test_ilu0_missing_diagonal():
    A = sp.csr_matrix(np.array([[0.0, 1.0], [1.0, 0.0]]))
    with pytest.raises(FactorizationError):
        ilu0_factor(A)


def test_smooth_zero_sweeps_returns_input(rng):
    A = laplacian_2d(3)
    x = rng.standard_normal(9)
    out = ilu0_smooth(A, ilu0_factor(A), x, rng.standard_normal(9), 0)
    assert np.array_equal(out, x)
    assert out is not x


def test_smooth_diagonal_single_sweep_is_exact(rng):
    d = np.array([3.0, 1.0, 7.0])
    A = diagonal(d)
    b = rng.standard_normal(3)
    x = ilu0_smooth(A, ilu0_factor(A), np.zeros(3), b, 1)
    assert np.allclose(x, b / d)


def test_smooth_residual_decreases_each_sweep(rng):
    A = laplacian_2d(6)
    fac = ilu0_factor(A)
    b = rng.standard_normal(36)
    x = np.zeros(36)
    previous = norm2(b)
    for _ in range(5):
        x = ilu0_smooth(A, fac, x, b, 1)
        current = norm2(b - A @ x)
        assert current < previous
        previous = current


def test_smooth_sweeps_compose(rng):
    A = laplacian_2d(5)
    fac = ilu0_factor(A)
    b = rng.standard_normal(25)
    x0 = rng.standard_normal(25)
    x = x0
    for _ in range(4):
        x = ilu0_smooth(A, fac, x, b, 1)
    assert np.array_equal(ilu0_smooth(A, fac, x0, b, 4), x)


def test_smooth_rejects_negative_sweeps():
    A = identity(2)
    with pytest.raises(ValueError):
        ilu0_smooth(A, ilu0_factor(A), np.zeros(2), np.zeros(2), -1)


def test_norms():
    assert norm2([3.0, 4.0]) == 5.0
    assert norm2(np.zeros(5)) == 0.0
    assert norm_inf([1.0, -7.0, 2.0]) == 7.0
    assert norm_inf([]) == 0.0


def test_matrix_market_round_trip(tmp_path, rng):
    dense = random_sparse(rng, 6)
    A = sp.csr_matrix(dense)
    write_matrix_market(tmp_path / "A.mtx", A, comment="test")
    assert (tmp_path / "A.mtx").read_text().startswith("%%MatrixMarket")
    assert np.array_equal(to_dense(read_matrix_market(tmp_path / "A.mtx")), dense)
