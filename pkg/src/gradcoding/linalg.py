"""Dense linear-algebra kernel shared by the encoding and decoding layers.

Every rank decision in the package goes through the same relative
singular-value cutoff, and residuals are computed by orthogonal projection
onto the column space, never by forming or inverting normal equations.
Complex arithmetic appears only in circulant_eigenvalues.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonFiniteError, ParameterError, ShapeError


@dataclass(frozen=True)
class Tolerance:
    """Numerical policy.

    rank_eps: singular values below rank_eps * sigma_max count as zero.
    eq_eps: entrywise tolerance for equality checks.
    """

    rank_eps: float = 1e-10
    eq_eps: float = 1e-9

    def __post_init__(self) -> None:
        if not (self.rank_eps > 0.0):
            raise ParameterError("rank_eps must be positive")
        if not (self.eq_eps > 0.0):
            raise ParameterError("eq_eps must be positive")


DEFAULT_TOL = Tolerance()


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-D float array, raising structured errors."""
    arr = np.asarray(a, dtype=float)
    if arr.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.size and not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{name} contains NaN or Inf")
    return arr


def _svd(mat: np.ndarray):
    # Empty matrices (zero rows or columns) get an explicit empty SVD so that
    # every caller handles the empty non-straggler set through one code path.
    if mat.shape[0] == 0 or mat.shape[1] == 0:
        u = np.zeros((mat.shape[0], 0))
        vt = np.zeros((0, mat.shape[1]))
        return u, np.zeros(0), vt
    return np.linalg.svd(mat, full_matrices=False)


def _rank_from_singulars(s: np.ndarray, rank_eps: float) -> int:
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rank_eps * s[0]))


def rank_of(mat, tol: Tolerance = DEFAULT_TOL) -> int:
    """Numerical rank: count of singular values above rank_eps * sigma_max."""
    m = as_matrix(mat)
    _, s, _ = _svd(m)
    return _rank_from_singulars(s, tol.rank_eps)


def least_squares_min_norm(mat, rhs, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Minimum-Frobenius-norm solution of min ||M R - Y||_F.

    The Moore-Penrose solution, well defined even when M^T M is singular.
    A 1-D rhs yields a 1-D result.
    """
    m = as_matrix(mat, "M")
    rhs_arr = np.asarray(rhs, dtype=float)
    vector_rhs = rhs_arr.ndim == 1
    y = as_matrix(rhs_arr.reshape(-1, 1) if vector_rhs else rhs_arr, "Y")
    if y.shape[0] != m.shape[0]:
        raise ShapeError(f"row counts differ: M has {m.shape[0]}, Y has {y.shape[0]}")
    u, s, vt = _svd(m)
    r = _rank_from_singulars(s, tol.rank_eps)
    coeff = (u[:, :r].T @ y) / s[:r, None] if r else np.zeros((0, y.shape[1]))
    out = vt[:r].T @ coeff if r else np.zeros((m.shape[1], y.shape[1]))
    return out[:, 0] if vector_rhs else out


def residual_err(mat, rhs, tol: Tolerance = DEFAULT_TOL) -> float:
    """min_R ||M R - Y||_F^2 via projection onto col(M).

    Equals ||Y||_F^2 - ||P Y||_F^2 with P the orthogonal projector; an a x 0
    matrix projects onto {0} so the residual is ||Y||_F^2.
    """
    m = as_matrix(mat, "M")
    y = as_matrix(rhs, "Y")
    if y.shape[0] != m.shape[0]:
        raise ShapeError(f"row counts differ: M has {m.shape[0]}, Y has {y.shape[0]}")
    total = float(np.sum(y * y))
    u, s, _ = _svd(m)
    r = _rank_from_singulars(s, tol.rank_eps)
    if r == 0:
        return total
    proj = u[:, :r].T @ y
    return max(total - float(np.sum(proj * proj)), 0.0)


def null_space_basis(mat, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the numerical null space, as columns.

    Each column x satisfies ||M x|| <= 10 * rank_eps * sigma_max * ||x||.
    Returns an empty-width matrix when the null space is trivial.
    """
    m = as_matrix(mat)
    if m.shape[0] == 0 or m.shape[1] == 0:
        return np.eye(m.shape[1])
    _, s, vt = np.linalg.svd(m, full_matrices=True)
    r = _rank_from_singulars(s, tol.rank_eps)
    return vt[r:].T.copy()


def circulant_eigenvalues(first_row) -> np.ndarray:
    """Eigenvalues of the circulant matrix with the given first row.

    lambda_r = sum_j row[j] * omega^(r j) with omega = exp(-2 pi i / k),
    which is exactly the DFT of the row.
    """
    row = np.asarray(first_row, dtype=float)
    if row.ndim != 1 or row.size < 1:
        raise ShapeError("first_row must be a nonempty 1-D vector")
    if not np.all(np.isfinite(row)):
        raise NonFiniteError("first_row contains NaN or Inf")
    eig = np.fft.fft(row)
    # The r=0 eigenvalue is the plain entry sum; keep it exact (integer for
    # 0/1 indicator rows) rather than trusting transform rounding.
    eig[0] = row.sum()
    return eig
