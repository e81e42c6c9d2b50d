import numpy as np
import pytest

from gradcoding.errors import NonFiniteError, ParameterError, ShapeError
from gradcoding.linalg import (
    Tolerance,
    circulant_eigenvalues,
    least_squares_min_norm,
    null_space_basis,
    rank_of,
    residual_err,
)


def test_tolerance_rejects_nonpositive():
    with pytest.raises(ParameterError):
        Tolerance(rank_eps=0.0)
    with pytest.raises(ParameterError):
        Tolerance(eq_eps=-1.0)


def test_rank_known_matrices():
    assert rank_of(np.eye(5)) == 5
    u = np.arange(1.0, 5.0)
    assert rank_of(np.outer(u, u)) == 1
    assert rank_of(np.zeros((3, 4))) == 0


def test_rank_empty_shapes():
    assert rank_of(np.zeros((0, 4))) == 0
    assert rank_of(np.zeros((4, 0))) == 0


def test_lstsq_matches_numpy_overdetermined():
    rng = np.random.default_rng(0)
    m = rng.standard_normal((12, 5))
    y = rng.standard_normal((12, 3))
    got = least_squares_min_norm(m, y)
    want, *_ = np.linalg.lstsq(m, y, rcond=None)
    assert np.allclose(got, want, atol=1e-10)


def test_lstsq_min_norm_underdetermined():
    rng = np.random.default_rng(1)
    m = rng.standard_normal((4, 9))
    y = rng.standard_normal((4, 2))
    got = least_squares_min_norm(m, y)
    want = np.linalg.pinv(m) @ y
    assert np.allclose(got, want, atol=1e-10)


def test_lstsq_vector_rhs_stays_vector():
    rng = np.random.default_rng(2)
    m = rng.standard_normal((6, 4))
    y = rng.standard_normal(6)
    got = least_squares_min_norm(m, y)
    assert got.shape == (4,)
    assert np.allclose(got, least_squares_min_norm(m, y[:, None])[:, 0])


def test_lstsq_input_errors():
    with pytest.raises(ShapeError):
        least_squares_min_norm(np.eye(3), np.zeros((4, 1)))
    with pytest.raises(NonFiniteError):
        least_squares_min_norm(np.array([[np.nan, 0.0]]), np.zeros((1, 1)))


def test_residual_zero_on_exact_fit():
    rng = np.random.default_rng(3)
    m = rng.standard_normal((8, 3))
    y = m @ rng.standard_normal((3, 2))
    assert residual_err(m, y) >= 0.0
    assert residual_err(m, y) <= 1e-10


def test_residual_known_value():
    # col(M) = span(e1): projection keeps one unit of each column of ones
    m = np.array([[1.0], [0.0], [0.0]])
    y = np.ones((3, 2))
    assert residual_err(m, y) == pytest.approx(4.0, abs=1e-12)


def test_residual_empty_matrix_is_total_mass():
    y = np.arange(6.0).reshape(3, 2)
    assert residual_err(np.zeros((3, 0)), y) == float(np.sum(y * y))


def test_residual_matches_direct_minimum():
    rng = np.random.default_rng(4)
    m = rng.standard_normal((10, 6))
    y = rng.standard_normal((10, 4))
    r = least_squares_min_norm(m, y)
    direct = float(np.sum((m @ r - y) ** 2))
    assert residual_err(m, y) == pytest.approx(direct, abs=1e-9)


def test_null_space_basis_properties():
    rng = np.random.default_rng(5)
    m = rng.standard_normal((3, 8))
    basis = null_space_basis(m)
    assert basis.shape == (8, 5)
    assert np.allclose(basis.T @ basis, np.eye(5), atol=1e-10)
    assert np.max(np.abs(m @ basis)) <= 1e-9


def test_null_space_trivial_for_full_rank_square():
    rng = np.random.default_rng(6)
    m = rng.standard_normal((5, 5))
    assert null_space_basis(m).shape == (5, 0)


def test_circulant_eigenvalues_match_dense():
    row = np.array([1.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0])
    k = row.size
    dense = np.empty((k, k))
    for i in range(k):
        for j in range(k):
            dense[i, j] = row[(j - i) % k]
    got = np.sort_complex(circulant_eigenvalues(row))
    want = np.sort_complex(np.linalg.eigvals(dense))
    assert np.allclose(got, want, atol=1e-8)


def test_circulant_dc_term_is_exact_sum():
    row = np.array([1.0, 0.0, 1.0, 1.0, 0.0])
    eig = circulant_eigenvalues(row)
    assert eig[0] == 3.0
    assert eig[0].imag == 0.0


def test_circulant_input_errors():
    with pytest.raises(ShapeError):
        circulant_eigenvalues(np.eye(2))
    with pytest.raises(NonFiniteError):
        circulant_eigenvalues(np.array([1.0, np.nan]))
