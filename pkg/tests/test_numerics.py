import numpy as np
import pytest
from scipy.linalg import eigh

from ompbounds.numerics import (
    IncrementalQR,
    RankDeficiencyError,
    gaussian_matrix,
    least_squares,
    min_singular_value,
    split_seed,
)
from reference import normal_equations_lstsq


def test_gaussian_matrix_shape_and_finiteness():
    A = gaussian_matrix(4, 7, seed=1)
    assert A.entries.shape == (4, 7)
    assert A.m == 4 and A.n == 7
    assert np.all(np.isfinite(A.entries))


def test_gaussian_matrix_rejects_zero_dimensions():
    with pytest.raises(ValueError):
        gaussian_matrix(0, 7, seed=1)
    with pytest.raises(ValueError):
        gaussian_matrix(4, 0, seed=1)


def test_gaussian_matrix_mean():
    # sample mean of N entries with per-entry std 1/sqrt(m) has std 1/sqrt(m*N)
    m, n = 200, 200
    A = gaussian_matrix(m, n, seed=321)
    N = m * n
    assert abs(A.entries.mean()) <= 3.0 / np.sqrt(m * N)


def test_gaussian_matrix_variance():
    m = 100
    A = gaussian_matrix(m, 1000, seed=77)
    var = A.entries.var()
    assert abs(var - 1.0 / m) <= 0.05 / m


def test_gaussian_matrix_seed_determinism():
    A1 = gaussian_matrix(30, 50, seed=42)
    A2 = gaussian_matrix(30, 50, seed=42)
    assert np.array_equal(A1.entries, A2.entries)
    A3 = gaussian_matrix(30, 50, seed=43)
    assert not np.array_equal(A1.entries, A3.entries)


def test_split_seed_deterministic_and_path_sensitive():
    assert split_seed(5, 1, 2) == split_seed(5, 1, 2)
    assert split_seed(5, 1, 2) != split_seed(5, 2, 1)
    assert split_seed(5, 1) != split_seed(6, 1)
    assert split_seed(-3, 0) == split_seed(-3, 0)  # negative seeds are masked


def test_least_squares_empty_support():
    A = gaussian_matrix(10, 20, seed=0)
    y = np.arange(10.0)
    sol = least_squares(A, y, [])
    assert sol.coefficients.size == 0
    assert np.array_equal(sol.residual, y)
    assert sol.residual_norm == pytest.approx(np.linalg.norm(y))


def test_least_squares_exact_interpolation():
    rng = np.random.default_rng(3)
    A = rng.standard_normal((6, 12))
    S = [1, 4, 7, 9, 10, 11]
    y = A[:, S] @ rng.standard_normal(6)
    sol = least_squares(A, y, S)
    assert sol.residual_norm <= 1e-10 * np.linalg.norm(y)


def test_least_squares_matches_normal_equations():
    rng = np.random.default_rng(8)
    A = rng.standard_normal((20, 30))
    y = rng.standard_normal(20)
    S = [2, 5, 11, 17, 28]
    sol = least_squares(A, y, S)
    ref = normal_equations_lstsq(A, y, S)
    assert np.allclose(sol.coefficients, ref, rtol=1e-8, atol=0)


def test_residual_orthogonal_to_selected_columns():
    rng = np.random.default_rng(12)
    A = rng.standard_normal((40, 60))
    y = rng.standard_normal(40)
    S = [0, 7, 33, 59]
    sol = least_squares(A, y, S)
    for j in S:
        assert abs(A[:, j] @ sol.residual) <= 1e-9 * np.linalg.norm(y)


def test_projection_never_increases_norm():
    rng = np.random.default_rng(21)
    for trial in range(20):
        A = rng.standard_normal((15, 25))
        y = rng.standard_normal(15)
        k = int(rng.integers(0, 10))
        S = rng.choice(25, size=k, replace=False)
        sol = least_squares(A, y, S)
        assert sol.residual_norm <= np.linalg.norm(y) * (1 + 1e-12)


def test_incremental_extension_matches_scratch():
    rng = np.random.default_rng(5)
    A = rng.standard_normal((25, 40))
    y = rng.standard_normal(25)
    qr = IncrementalQR(A, y)
    for j in [3, 9, 14]:
        qr.append(j)
    qr.append(22)
    incremental = qr.solution()
    scratch = least_squares(A, y, [3, 9, 14, 22])
    assert np.allclose(incremental.coefficients, scratch.coefficients, rtol=1e-8)
    assert np.allclose(incremental.residual, scratch.residual, atol=1e-8)


def test_rank_deficiency_detected():
    rng = np.random.default_rng(9)
    A = rng.standard_normal((10, 5))
    A[:, 3] = 2.0 * A[:, 1]
    with pytest.raises(RankDeficiencyError):
        least_squares(A, np.ones(10), [1, 3])


def test_least_squares_rejects_oversized_support():
    A = gaussian_matrix(4, 10, seed=2)
    with pytest.raises(ValueError):
        least_squares(A, np.ones(4), [0, 1, 2, 3, 4])


def test_least_squares_dimension_mismatch():
    A = gaussian_matrix(4, 10, seed=2)
    with pytest.raises(ValueError):
        least_squares(A, np.ones(5), [0])


def test_min_singular_value_identity():
    assert min_singular_value(np.eye(5)) == pytest.approx(1.0)


def test_min_singular_value_unit_column():
    v = np.zeros((7, 1))
    v[2, 0] = 1.0
    assert min_singular_value(v) == pytest.approx(1.0)


def test_min_singular_value_matches_eig_oracle():
    rng = np.random.default_rng(14)
    B = rng.standard_normal((30, 10))
    smin = min_singular_value(B)
    eigs = eigh(B.T @ B, eigvals_only=True)
    assert smin == pytest.approx(np.sqrt(eigs[0]), rel=1e-6)


def test_min_singular_value_below_first_column_norm():
    rng = np.random.default_rng(15)
    B = rng.standard_normal((20, 6))
    assert min_singular_value(B) <= np.linalg.norm(B[:, 0]) + 1e-12


def test_min_singular_value_rejects_bad_shapes():
    with pytest.raises(ValueError):
        min_singular_value(np.empty((0, 3)))
    with pytest.raises(ValueError):
        min_singular_value(np.ones((2, 5)))
