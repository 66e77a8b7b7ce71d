"""Operator representations, transforms and lifts."""

import math

import numpy as np
import pytest

from gaplab import (
    DiagonalOp,
    InvalidInput,
    MatrixOp,
    NotInvertibleDefect,
    NotSelfadjoint,
    ShiftedDiagonalOp,
    TensorExtendedOp,
    Unsupported,
    adjoint,
    bounded_transform,
    cayley_transform,
    const_tail,
    dense,
    density_approximant,
    from_bounded_transform,
    fuglede_operator,
    gap_sup_distance,
    hermitian_apply,
    is_bounded,
    is_selfadjoint,
    odd_lift,
    operator_norm,
    operator_norm_of,
    poly_tail,
    resolvent_operator,
    symbol,
    tensor_extend,
    truncated_dense,
)


def diag(prefix=(), tail=None):
    return DiagonalOp(symbol(prefix=prefix, tail=tail))


def test_construction_validation():
    with pytest.raises(InvalidInput):
        ShiftedDiagonalOp(-1, symbol(tail=const_tail(1.0)))
    with pytest.raises(InvalidInput):
        TensorExtendedOp(MatrixOp([[1.0]]), 0)
    with pytest.raises(InvalidInput):
        MatrixOp([[float("nan")]])


def test_shift_order_zero_collapses_to_diagonal():
    sym = symbol(prefix=(2.0,), tail=const_tail(1.0))
    t0 = ShiftedDiagonalOp(0, sym)
    d = DiagonalOp(sym)
    assert isinstance(adjoint(adjoint(t0)), DiagonalOp)
    assert gap_sup_distance(t0, d).value == 0.0


def test_dense_and_truncated_dense():
    m = MatrixOp([[1.0, 2.0], [3.0, 4.0]])
    assert np.allclose(dense(m), [[1, 2], [3, 4]])
    with pytest.raises(Unsupported):
        dense(diag(tail=const_tail(1.0)))

    d = diag(prefix=(5.0,), tail=poly_tail([0.0, 1.0]))
    assert np.allclose(truncated_dense(d, 3), np.diag([5.0, 2.0, 3.0]))

    s = ShiftedDiagonalOp(2, symbol(tail=const_tail(1.0)))
    ts = truncated_dense(s, 3)
    assert ts.shape == (5, 3)
    assert np.allclose(ts[2:, :], np.eye(3))
    assert np.allclose(ts[:2, :], 0.0)


def test_adjoint_matrix_and_diagonal():
    m = MatrixOp([[1.0 + 1j, 2.0], [0.0, 3.0 - 1j]])
    assert np.allclose(dense(adjoint(m)), dense(m).conj().T)
    d = diag(prefix=(1j,), tail=const_tail(2.0 - 1j))
    back = adjoint(adjoint(d))
    assert np.allclose(truncated_dense(back, 4), truncated_dense(d, 4))


def test_adjoint_shift_is_coshift():
    s = ShiftedDiagonalOp(1, symbol(prefix=(1.0 + 1j,), tail=const_tail(2.0)))
    a = adjoint(s)
    n = 5
    assert np.allclose(truncated_dense(a, n), truncated_dense(s, n - 1).conj().T)
    rt = adjoint(a)
    assert isinstance(rt, ShiftedDiagonalOp)
    assert np.allclose(truncated_dense(rt, 4), truncated_dense(s, 4))


def test_is_selfadjoint():
    assert is_selfadjoint(MatrixOp([[2.0, 1j], [-1j, 0.0]]))
    assert not is_selfadjoint(MatrixOp([[0.0, 1.0], [0.0, 0.0]]))
    assert is_selfadjoint(diag(prefix=(1.0,), tail=poly_tail([0.0, 1.0])))
    assert not is_selfadjoint(diag(prefix=(1j,), tail=const_tail(1.0)))
    assert not is_selfadjoint(ShiftedDiagonalOp(1, symbol(tail=const_tail(1.0))))


def test_bounded_transform_matrix_oracle():
    a = np.array([[1.0, 2.0], [0.0, 1.0j]])
    f = bounded_transform(MatrixOp(a))
    oracle = a @ hermitian_apply(a.conj().T @ a, lambda x: (1.0 + x) ** -0.5)
    assert operator_norm(dense(f.op) - oracle) < 1e-12
    assert operator_norm_of(f.op) <= 1.0 + 1e-12


def test_bounded_transform_diagonal_values():
    d = diag(prefix=(3.0,), tail=poly_tail([0.0, 1.0]))
    f = bounded_transform(d)
    vals = np.diag(truncated_dense(f.op, 4))
    expect = [3.0 / math.sqrt(10.0)] + [j / math.sqrt(1.0 + j * j) for j in (2, 3, 4)]
    assert np.allclose(vals, expect, atol=1e-14)


def test_from_bounded_transform_round_trip():
    a = np.array([[0.3, 0.1 - 0.2j], [0.0, -0.4]])
    t = MatrixOp(a)
    back = from_bounded_transform(bounded_transform(t).op)
    assert operator_norm(dense(back) - a) < 1e-8

    d = diag(prefix=(1.5,), tail=const_tail(-0.5))
    b2 = from_bounded_transform(bounded_transform(d).op)
    assert np.allclose(truncated_dense(b2, 4), truncated_dense(d, 4), atol=1e-9)


def test_from_bounded_transform_rejects_unit_norm():
    with pytest.raises(NotInvertibleDefect):
        from_bounded_transform(MatrixOp(np.eye(2)))


def test_is_bounded():
    assert is_bounded(MatrixOp([[100.0]]))
    assert is_bounded(diag(tail=const_tail(7.0)))
    assert not is_bounded(diag(tail=poly_tail([0.0, 1.0])))
    assert not is_bounded(diag(tail=poly_tail([0.0, -2.0, 0.0])) )
    assert is_bounded(tensor_extend(MatrixOp([[4.0]]), 3))


def test_cayley_transform_matrix():
    h = np.array([[1.0, 2.0], [2.0, -1.0]])
    c = dense(cayley_transform(MatrixOp(h)))
    assert operator_norm(c.conj().T @ c - np.eye(2)) < 1e-12
    ident = np.eye(2) - 2j * np.linalg.inv(h + 1j * np.eye(2))
    assert operator_norm(c - ident) < 1e-12
    with pytest.raises(NotSelfadjoint):
        cayley_transform(MatrixOp([[0.0, 1.0], [0.0, 0.0]]))


def test_cayley_transform_diagonal_values():
    d = diag(prefix=(2.0,), tail=poly_tail([0.0, 1.0]))
    c = cayley_transform(d)
    vals = np.diag(truncated_dense(c, 3))
    expect = [(a - 1j) / (a + 1j) for a in (2.0, 2.0, 3.0)]
    assert np.allclose(vals, expect, atol=1e-14)
    assert np.allclose(np.abs(vals), 1.0, atol=1e-14)


def test_resolvent_operator():
    d = diag(prefix=(1.0,), tail=const_tail(0.0))
    r = resolvent_operator(d, 1)
    vals = np.diag(truncated_dense(r, 3))
    assert np.allclose(vals, [1.0 / (1.0 + 1j), -1j, -1j], atol=1e-14)
    with pytest.raises(InvalidInput):
        resolvent_operator(d, 2)
    with pytest.raises(NotSelfadjoint):
        resolvent_operator(diag(tail=const_tail(1j)), 1)


def test_odd_lift_matrix_blocks():
    a = np.array([[1.0, 2.0 - 1j], [0.0, 3.0]])
    lift = odd_lift(MatrixOp(a))
    lm = dense(lift)
    assert is_selfadjoint(lift)
    assert np.allclose(lm[:2, 2:], a.conj().T)
    assert np.allclose(lm[2:, :2], a)
    assert np.allclose(lm[:2, :2], 0.0) and np.allclose(lm[2:, 2:], 0.0)
    # the square is block diagonal with t*t and t t*
    sq = lm @ lm
    assert np.allclose(sq[:2, :2], a.conj().T @ a)
    assert np.allclose(sq[2:, 2:], a @ a.conj().T)


def test_odd_lift_diagonal_truncation():
    d = diag(prefix=(1j,), tail=const_tail(2.0))
    lm = truncated_dense(odd_lift(d), 2)
    vals = np.diag([1j, 2.0])
    assert np.allclose(lm[:2, 2:], vals.conj().T)
    assert np.allclose(lm[2:, :2], vals)


def test_tensor_extend():
    m = MatrixOp([[1.0, 2.0], [3.0, 4.0]])
    t = tensor_extend(m, 3)
    assert np.allclose(dense(t), np.kron(np.eye(3), dense(m)))
    assert tensor_extend(m, 1).multiplicity == 1
    with pytest.raises(InvalidInput):
        tensor_extend(m, 0)
    assert operator_norm_of(t) == operator_norm_of(m)


def test_fuglede_operator_symbols():
    base = fuglede_operator(0)
    assert np.allclose(np.diag(truncated_dense(base, 5)), [1, 2, 3, 4, 5])
    flipped = fuglede_operator(3)
    assert np.allclose(np.diag(truncated_dense(flipped, 5)), [1, 2, -3, 4, 5])
    assert is_selfadjoint(flipped)
    assert not is_bounded(flipped)
    with pytest.raises(InvalidInput):
        fuglede_operator(-1)


def test_density_approximant_is_bounded():
    t = fuglede_operator(0)
    for n in (1, 5):
        tn = density_approximant(t, n)
        assert is_bounded(tn)
        # diagonal values are the inverse transform of (n/(n+1)) F
        vals = np.diag(truncated_dense(tn, 3)).real
        c = n / (n + 1.0)
        f = [j / math.sqrt(1.0 + j * j) for j in (1, 2, 3)]
        expect = [c * x / math.sqrt(1.0 - (c * x) ** 2) for x in f]
        assert np.allclose(vals, expect, atol=1e-12)
    with pytest.raises(InvalidInput):
        density_approximant(t, 0)


def test_operator_norm_of():
    assert operator_norm_of(MatrixOp([[1.0, 1.0], [1.0, 1.0]])) == pytest.approx(2.0)
    assert operator_norm_of(diag(prefix=(5.0,), tail=const_tail(1.0))) == 5.0
    assert operator_norm_of(diag(tail=poly_tail([0.0, 1.0]))) == math.inf
    s = ShiftedDiagonalOp(1, symbol(tail=const_tail(2.0)))
    assert operator_norm_of(s) == 2.0
