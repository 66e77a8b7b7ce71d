"""Dense kernel tests against hand-computed oracles."""

import numpy as np
import pytest

from gaplab import (
    InvalidInput,
    as_complex_matrix,
    hermitian_apply,
    numerical_rank,
    operator_norm,
    svd_factor,
)


def test_as_complex_matrix_shapes():
    m = as_complex_matrix(3.0)
    assert m.shape == (1, 1) and m[0, 0] == 3.0 + 0.0j
    row = as_complex_matrix([1.0, 2.0, 3.0])
    assert row.shape == (1, 3)
    assert as_complex_matrix([[1, 2], [3, 4]]).dtype == np.complex128


def test_as_complex_matrix_is_frozen_copy():
    src = np.array([[1.0, 2.0], [3.0, 4.0]])
    m = as_complex_matrix(src)
    src[0, 0] = 99.0
    assert m[0, 0] == 1.0
    with pytest.raises(ValueError):
        m[0, 0] = 5.0


def test_as_complex_matrix_rejections():
    with pytest.raises(InvalidInput):
        as_complex_matrix([[1.0, float("nan")]])
    with pytest.raises(InvalidInput):
        as_complex_matrix([[float("inf")]])
    with pytest.raises(InvalidInput):
        as_complex_matrix(np.zeros((2, 2, 2)))
    with pytest.raises(InvalidInput):
        as_complex_matrix(np.zeros((0, 3)))
    with pytest.raises(InvalidInput):
        as_complex_matrix("not a matrix")


def test_operator_norm_oracles():
    # rank-one all-ones matrix: eigenvalues 2 and 0
    assert operator_norm([[1.0, 1.0], [1.0, 1.0]]) == pytest.approx(2.0, abs=1e-14)
    # singular values of [[0,2],[1,0]] are exactly 2 and 1
    assert operator_norm([[0.0, 2.0], [1.0, 0.0]]) == pytest.approx(2.0, abs=1e-14)
    assert operator_norm([[3j]]) == pytest.approx(3.0, abs=1e-14)
    # unitary rotation leaves the norm at 1
    c, s = np.cos(0.7), np.sin(0.7)
    assert operator_norm([[c, -s], [s, c]]) == pytest.approx(1.0, abs=1e-14)


def test_svd_factor_reconstructs():
    rng = np.random.default_rng(7)
    for rows, cols in [(1, 1), (2, 3), (4, 2), (5, 5)]:
        mat = rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))
        u, s, v = svd_factor(mat)
        assert np.all(np.diff(s) <= 0)
        recon = u @ np.diag(s) @ v.conj().T
        assert operator_norm(recon - mat) < 1e-12
        k = min(rows, cols)
        assert operator_norm(u.conj().T @ u - np.eye(k)) < 1e-12
        assert operator_norm(v.conj().T @ v - np.eye(k)) < 1e-12


def test_svd_factor_oracle_values():
    _, s, _ = svd_factor([[0.0, 2.0], [1.0, 0.0]])
    assert np.allclose(s, [2.0, 1.0], atol=1e-14)


def test_numerical_rank():
    assert numerical_rank(np.diag([1.0, 1e-14])) == 1
    assert numerical_rank(np.diag([1.0, 1e-6])) == 2
    assert numerical_rank(np.zeros((3, 3))) == 0
    assert numerical_rank(np.eye(4)) == 4
    # threshold is relative to max(1, s_max): tiny matrices count as rank 0
    assert numerical_rank([[1e-12]]) == 0
    with pytest.raises(InvalidInput):
        numerical_rank(np.eye(2), eps=0.0)
    with pytest.raises(InvalidInput):
        numerical_rank(np.eye(2), eps=1.5)


def test_hermitian_apply_square_oracle():
    h = np.array([[2.0, 1.0 - 1.0j], [1.0 + 1.0j, 3.0]])
    sq = hermitian_apply(h, lambda x: x * x)
    assert operator_norm(sq - h @ h) < 1e-12


def test_hermitian_apply_inverse_sqrt():
    rng = np.random.default_rng(11)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = np.eye(4) + a.conj().T @ a  # positive definite
    r = hermitian_apply(h, lambda x: x ** -0.5)
    assert operator_norm(r @ h @ r - np.eye(4)) < 1e-10


def test_hermitian_apply_rejects_non_hermitian():
    with pytest.raises(InvalidInput, match="not Hermitian"):
        hermitian_apply([[0.0, 1.0], [0.0, 0.0]], lambda x: x)
    with pytest.raises(InvalidInput):
        hermitian_apply(np.zeros((2, 3)), lambda x: x)
