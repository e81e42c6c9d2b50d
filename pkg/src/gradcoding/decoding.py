"""Server-side decoding: target matrix, optimal decoding coefficients,
approximation error, and gradient block assembly.

The target matrix F is mk x m with column i the indicator of gradient block
i's rows; the exact aggregate gradient is Z F. For a set of surviving
workers, decoding solves a minimum-norm least-squares fit of F by the
surviving columns of B; the approximation error is the squared Frobenius
residual, computed by projection so that singular Gram matrices need no
special casing.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .encoders import EncodingMatrix
from .errors import ParameterError, ShapeError
from .linalg import DEFAULT_TOL, Tolerance, least_squares_min_norm, residual_err

_ERR_CONSISTENCY_EPS = 1e-8


@dataclass(frozen=True)
class TargetMatrix:
    mat: np.ndarray
    k: int
    m: int


@dataclass(frozen=True)
class NonStragglerSet:
    """Sorted 0-based indices of workers that returned their result."""

    n: int
    members: tuple[int, ...]

    def __post_init__(self) -> None:
        mem = tuple(int(i) for i in self.members)
        if any(not (0 <= i < self.n) for i in mem):
            raise ParameterError("member index out of range")
        if len(set(mem)) != len(mem):
            raise ParameterError("duplicate member index")
        object.__setattr__(self, "members", tuple(sorted(mem)))

    @property
    def s(self) -> int:
        """Number of stragglers."""
        return self.n - len(self.members)

    @classmethod
    def full(cls, n: int) -> "NonStragglerSet":
        return cls(n=n, members=tuple(range(n)))

    def to_dict(self) -> dict:
        return {"members": list(self.members), "s": self.s}


@dataclass(frozen=True)
class DecodeResult:
    """Decoding coefficients (n x m, zero off the surviving workers) and the
    squared-Frobenius approximation error."""

    coeffs: np.ndarray
    err: float

    def to_dict(self, workers: NonStragglerSet) -> dict:
        return {"members": list(workers.members), "s": workers.s, "err": self.err}


@dataclass(frozen=True)
class GradientBlockMatrix:
    """Blocks of the per-subset gradients: column u*k + i holds block u of
    g_i. d is the padded length (a multiple of m), d_orig the length before
    zero-padding."""

    mat: np.ndarray
    k: int
    m: int
    d: int
    d_orig: int


def build_target(k: int, m: int) -> TargetMatrix:
    """F with column i indicating rows ik..(i+1)k-1; F^T F = k I."""
    if k < 1 or m < 1:
        raise ParameterError("k and m must be positive")
    mat = np.zeros((m * k, m))
    for i in range(m):
        mat[i * k : (i + 1) * k, i] = 1.0
    return TargetMatrix(mat=mat, k=k, m=m)


def decode_matrix(
    bmat: np.ndarray, m: int, workers: NonStragglerSet, tol: Tolerance = DEFAULT_TOL
) -> DecodeResult:
    """Core decode on a raw mk x n encoding matrix."""
    rows, n = bmat.shape
    if rows % m != 0:
        raise ShapeError(f"row count {rows} is not a multiple of m={m}")
    if workers.n != n:
        raise ShapeError(f"worker count {workers.n} does not match n={n}")
    k = rows // m
    target = build_target(k, m).mat
    members = list(workers.members)
    coeffs = np.zeros((n, m))
    if not members:
        return DecodeResult(coeffs=coeffs, err=float(m * k))
    sub = bmat[:, members]
    coeffs[members, :] = least_squares_min_norm(sub, target, tol)
    err = residual_err(sub, target, tol)
    direct = float(np.sum((bmat @ coeffs - target) ** 2))
    assert abs(err - direct) <= _ERR_CONSISTENCY_EPS * max(1.0, direct), (
        f"projection residual {err} disagrees with direct residual {direct}"
    )
    return DecodeResult(coeffs=coeffs, err=err)


def decode(
    B: EncodingMatrix, workers: NonStragglerSet, tol: Tolerance = DEFAULT_TOL
) -> DecodeResult:
    """Optimal decoding of B against its target for the given survivors."""
    return decode_matrix(B.mat, B.m, workers, tol)


def split_gradients(partials: Sequence[np.ndarray], m: int) -> GradientBlockMatrix:
    """Arrange k per-subset gradient vectors into the block matrix Z.

    Each vector is zero-padded at the tail to d' = m * ceil(d / m) and cut
    into m blocks of length d'/m; Z has shape (d'/m) x (mk) with column
    u*k + i equal to block u of g_i, so that Z F sums the subset gradients
    blockwise.
    """
    k = len(partials)
    if k == 0:
        raise ParameterError("need at least one partial gradient")
    if m < 1:
        raise ParameterError("m must be positive")
    vecs = [np.asarray(g, dtype=float).ravel() for g in partials]
    d = vecs[0].size
    if any(v.size != d for v in vecs):
        raise ShapeError("partial gradients differ in length")
    sub = -(-d // m)  # ceil
    padded = np.zeros((k, m * sub))
    for i, v in enumerate(vecs):
        padded[i, :d] = v
    mat = np.zeros((sub, m * k))
    for u in range(m):
        mat[:, u * k : (u + 1) * k] = padded[:, u * sub : (u + 1) * sub].T
    return GradientBlockMatrix(mat=mat, k=k, m=m, d=m * sub, d_orig=d)


def reconstruct(
    Z: GradientBlockMatrix,
    B: EncodingMatrix,
    workers: NonStragglerSet,
    tol: Tolerance = DEFAULT_TOL,
) -> tuple[np.ndarray, float]:
    """Approximate aggregate gradient blocks Z B R and the Frobenius gap to
    the exact Z F. The operator-norm bound gap^2 <= ||Z||_2^2 * err is
    asserted."""
    if Z.k != B.k or Z.m != B.m:
        raise ShapeError("gradient blocks and encoding disagree on (k, m)")
    dec = decode(B, workers, tol)
    target = build_target(B.k, B.m).mat
    approx = Z.mat @ (B.mat @ dec.coeffs)
    exact = Z.mat @ target
    gap = float(np.linalg.norm(approx - exact))
    if Z.mat.size:
        znorm = float(np.linalg.norm(Z.mat, 2))
        limit = znorm * znorm * dec.err
        assert gap * gap <= limit * (1.0 + 1e-8) + 1e-8, (
            f"operator-norm bound violated: gap^2={gap * gap} > {limit}"
        )
    return approx, gap


def merge_blocks(approx: np.ndarray, d_orig: int) -> np.ndarray:
    """Stack the m block columns back into one vector and drop the padding."""
    return np.ravel(approx, order="F")[:d_orig]
