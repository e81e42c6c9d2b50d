import numpy as np
import pytest

import gradcoding as gc
from gradcoding.errors import ParameterError


def test_sample_diagonal_sign_only_law():
    rng = np.random.default_rng(0)
    d = gc.sample_diagonal(1000, gc.DiagonalLaw(0.0), rng)
    assert set(np.unique(d)) == {-1.0, 1.0}


def test_sample_diagonal_magnitude_range():
    rng = np.random.default_rng(1)
    d = gc.sample_diagonal(2000, gc.DiagonalLaw(0.3), rng)
    mags = np.abs(d)
    assert np.all((mags >= 0.7) & (mags <= 1.3))
    assert (d > 0).any() and (d < 0).any()


def test_diagonal_law_domain():
    with pytest.raises(ParameterError):
        gc.DiagonalLaw(1.0)
    with pytest.raises(ParameterError):
        gc.DiagonalLaw(-0.1)


def test_random_diagonal_blocks_scale_columns(fano):
    B = gc.encode_random_diagonal(fano, 2, gc.DiagonalLaw(0.2), seed=3)
    assert B.mat.shape == (14, 7)
    assert gc.verify_support(B)
    for i in range(2):
        d = B.randomness.diagonals[i]
        assert np.allclose(B.block(i), fano.mat * d[None, :])


def test_random_diagonal_reproducible(fano):
    a = gc.encode_random_diagonal(fano, 2, gc.DiagonalLaw(0.0), seed=5)
    b = gc.encode_random_diagonal(fano, 2, gc.DiagonalLaw(0.0), seed=5)
    c = gc.encode_random_diagonal(fano, 2, gc.DiagonalLaw(0.0), seed=6)
    assert np.array_equal(a.mat, b.mat)
    assert not np.array_equal(a.mat, c.mat)


def test_baseline_stacks_plain_copies(fano):
    B = gc.encode_baseline(fano, 3)
    assert B.mat.shape == (21, 7)
    for i in range(3):
        assert np.array_equal(B.block(i), fano.mat)
    assert B.seed is None and B.randomness is None


def test_encoders_reject_nonpositive_m(fano):
    with pytest.raises(ParameterError):
        gc.encode_baseline(fano, 0)
    with pytest.raises(ParameterError):
        gc.encode_random_diagonal(fano, 0, gc.DiagonalLaw(0.0), seed=0)


@pytest.mark.parametrize("policy", [gc.V1_ALL_ONES, gc.V1_GAUSSIAN])
def test_nullspace_encoding_recovers_exactly(bireg40, policy):
    B = gc.encode_nullspace_hadamard(bireg40, 2, v1_policy=policy, seed=0)
    assert gc.verify_support(B)
    vectors = B.randomness.vectors
    for i in range(2):
        want = np.zeros(40)
        want[i * 20 : (i + 1) * 20] = 1.0
        assert np.max(np.abs(B.mat @ vectors[i] - want)) < 1e-10


def test_nullspace_encoding_requires_square_total(fano):
    with pytest.raises(ParameterError):
        gc.encode_nullspace_hadamard(fano, 2)  # n=7 != m*k=14


def test_nullspace_pm1_search_fails_gracefully(bireg40):
    # no +/-1 vector annihilates block 1 here; the record says so and the
    # unconstrained fallback still satisfies the recovery identity
    B = gc.encode_nullspace_hadamard(bireg40, 2, constrain_pm1=True, seed=0)
    assert not B.randomness.pm1_found
    v2 = B.randomness.vectors[1]
    want = np.zeros(40)
    want[20:] = 1.0
    assert np.max(np.abs(B.mat @ v2 - want)) < 1e-10


def test_nullspace_pm1_search_succeeds_on_disjoint_supports():
    # disjoint row supports of even size admit sign-balanced +/-1 vectors
    A = gc.biregular_random(n=4, k=2, delta=1, gamma=2, seed=0)
    B = gc.encode_nullspace_hadamard(A, 2, constrain_pm1=True, seed=0)
    assert B.randomness.pm1_found
    v2 = B.randomness.vectors[1]
    assert np.all(np.abs(v2) == 1.0)


def test_nullspace_gaussian_policy_randomizes(bireg40):
    a = gc.encode_nullspace_hadamard(bireg40, 2, v1_policy=gc.V1_GAUSSIAN, seed=0)
    b = gc.encode_nullspace_hadamard(bireg40, 2, v1_policy=gc.V1_GAUSSIAN, seed=1)
    assert not np.array_equal(a.mat, b.mat)


def test_nullspace_rejects_unknown_policy(bireg40):
    with pytest.raises(ParameterError):
        gc.encode_nullspace_hadamard(bireg40, 2, v1_policy="sparse")


def test_verify_support_detects_off_support_entry(fano):
    B = gc.encode_baseline(fano, 2)
    mat = B.mat.copy()
    i, j = np.argwhere(mat == 0.0)[0]
    mat[i, j] = 0.5
    tampered = gc.EncodingMatrix(
        mat=mat, m=2, scheme=B.scheme, parent=fano, seed=None, randomness=None
    )
    assert not gc.verify_support(tampered)


def test_encoding_block_slices(fano):
    B = gc.encode_baseline(fano, 2)
    assert np.array_equal(B.block(1), B.mat[7:14])
    assert B.k == 7 and B.n == 7
