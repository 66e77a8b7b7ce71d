"""Concrete operator representations and the transforms connecting them.

Five representations share one API: dense matrices, diagonal operators given
by a symbol, shifted diagonal operators S^k diag(a) (and their adjoints), odd
selfadjoint lifts of diagonal symbols, and tensor extensions 1 (x) A.  Dense
operators are always bounded; unbounded operators enter only through symbols
with divergent tails.  The bounded transform F_t = t (1 + t*t)^{-1/2} and its
inverse move between operators and strict contractions and are exact on the
symbolic side thanks to mapped tails.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .config import DEFAULT_TOL, ToleranceConfig
from .errors import (
    InvalidInput,
    NotInvertibleDefect,
    NotSelfadjoint,
    NumericalFailure,
    ShapeMismatch,
    Unsupported,
)
from .linalg import as_complex_matrix, hermitian_apply, operator_norm
from .symbols import (
    ScalarMap,
    SymbolSpec,
    MappedTail,
    apply_map_to_symbol,
    conjugate_symbol,
    is_real_symbol,
    poly_tail,
    stable_index,
    symbol,
    symbol_sup_abs,
    symbol_values,
    _tail_regime,
)

_LINEAR_TAIL = poly_tail((0.0, 1.0))


@dataclass(frozen=True, eq=False)
class MatrixOp:
    """Dense operator from C^n to C^m, stored as an m x n complex matrix."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrix", as_complex_matrix(self.matrix))


@dataclass(frozen=True, eq=False)
class DiagonalOp:
    """diag(a_1, a_2, ...) on l2, with the symbol giving the diagonal."""

    symbol: SymbolSpec

    def __post_init__(self) -> None:
        if not isinstance(self.symbol, SymbolSpec):
            raise InvalidInput("DiagonalOp requires a SymbolSpec")


@dataclass(frozen=True, eq=False)
class ShiftedDiagonalOp:
    """S^k diag(a) on l2, where S is the unilateral shift and k >= 0.

    k = 0 degenerates to a plain diagonal operator and is treated as one.
    """

    k: int
    symbol: SymbolSpec

    def __post_init__(self) -> None:
        if not isinstance(self.k, int) or self.k < 0:
            raise InvalidInput(f"shift order must be a nonnegative integer, got {self.k!r}")
        if not isinstance(self.symbol, SymbolSpec):
            raise InvalidInput("ShiftedDiagonalOp requires a SymbolSpec")


@dataclass(frozen=True, eq=False)
class CoShiftedDiagonalOp:
    """diag(a) S*^k, the adjoint of a shifted diagonal operator.

    Produced internally by adjoint(); it has the mirrored kernel data.
    """

    k: int
    symbol: SymbolSpec

    def __post_init__(self) -> None:
        if not isinstance(self.k, int) or self.k < 0:
            raise InvalidInput(f"shift order must be a nonnegative integer, got {self.k!r}")
        if not isinstance(self.symbol, SymbolSpec):
            raise InvalidInput("CoShiftedDiagonalOp requires a SymbolSpec")


@dataclass(frozen=True, eq=False)
class OddDiagonalOp:
    """Odd lift of a diagonal symbol: blocks [[0, conj(a_j)], [a_j, 0]].

    Selfadjoint for every symbol; produced by odd_lift().
    """

    symbol: SymbolSpec

    def __post_init__(self) -> None:
        if not isinstance(self.symbol, SymbolSpec):
            raise InvalidInput("OddDiagonalOp requires a SymbolSpec")


@dataclass(frozen=True, eq=False)
class TensorExtendedOp:
    """1_{C^k} (x) inner, acting on C^k (x) C^n."""

    inner: MatrixOp
    multiplicity: int

    def __post_init__(self) -> None:
        if not isinstance(self.inner, MatrixOp):
            raise InvalidInput("TensorExtendedOp wraps a MatrixOp")
        if not isinstance(self.multiplicity, int) or self.multiplicity < 1:
            raise InvalidInput("multiplicity must be an integer >= 1")


Operator = Union[
    MatrixOp,
    DiagonalOp,
    ShiftedDiagonalOp,
    CoShiftedDiagonalOp,
    OddDiagonalOp,
    TensorExtendedOp,
]


@dataclass(frozen=True, eq=False)
class BoundedTransform:
    """Result of the bounded transform: a contraction plus a flag recording
    whether the defect 1 - F*F is numerically injective."""

    op: Operator
    defect_injective: bool


def _normalize(t: Operator) -> Operator:
    """Collapse shift order zero to the diagonal representation."""
    if isinstance(t, (ShiftedDiagonalOp, CoShiftedDiagonalOp)) and t.k == 0:
        return DiagonalOp(t.symbol)
    return t


def _diag_family(t: Operator):
    """(family, shift order, symbol) for symbol-backed representations."""
    t = _normalize(t)
    if isinstance(t, DiagonalOp):
        return ("diag", 0, t.symbol)
    if isinstance(t, ShiftedDiagonalOp):
        return ("shift", t.k, t.symbol)
    if isinstance(t, CoShiftedDiagonalOp):
        return ("coshift", t.k, t.symbol)
    if isinstance(t, OddDiagonalOp):
        return ("odd", 0, t.symbol)
    return None


def _rebuild(t: Operator, sym: SymbolSpec) -> Operator:
    if isinstance(t, DiagonalOp):
        return DiagonalOp(sym)
    if isinstance(t, ShiftedDiagonalOp):
        return ShiftedDiagonalOp(t.k, sym)
    if isinstance(t, CoShiftedDiagonalOp):
        return CoShiftedDiagonalOp(t.k, sym)
    if isinstance(t, OddDiagonalOp):
        return OddDiagonalOp(sym)
    raise Unsupported(f"cannot rebuild {type(t).__name__} from a symbol")


# ---------------------------------------------------------------------------
# basic structure

def adjoint(t: Operator) -> Operator:
    t = _normalize(t)
    if isinstance(t, MatrixOp):
        return MatrixOp(t.matrix.conj().T)
    if isinstance(t, DiagonalOp):
        return DiagonalOp(conjugate_symbol(t.symbol))
    if isinstance(t, ShiftedDiagonalOp):
        return CoShiftedDiagonalOp(t.k, conjugate_symbol(t.symbol))
    if isinstance(t, CoShiftedDiagonalOp):
        return ShiftedDiagonalOp(t.k, conjugate_symbol(t.symbol))
    if isinstance(t, OddDiagonalOp):
        return t
    if isinstance(t, TensorExtendedOp):
        return TensorExtendedOp(adjoint(t.inner), t.multiplicity)
    raise InvalidInput(f"not an operator: {type(t).__name__}")


def is_selfadjoint(t: Operator, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    t = _normalize(t)
    if isinstance(t, MatrixOp):
        a = t.matrix
        if a.shape[0] != a.shape[1]:
            return False
        return operator_norm(a - a.conj().T) <= tol.eps_residual * (1.0 + operator_norm(a))
    if isinstance(t, DiagonalOp):
        return is_real_symbol(t.symbol, tol.eps_residual)
    if isinstance(t, (ShiftedDiagonalOp, CoShiftedDiagonalOp)):
        return False
    if isinstance(t, OddDiagonalOp):
        return True
    if isinstance(t, TensorExtendedOp):
        return is_selfadjoint(t.inner, tol)
    raise InvalidInput(f"not an operator: {type(t).__name__}")


def operator_norm_of(t: Operator) -> float:
    """Operator norm as an extended real (inf for unbounded symbols)."""
    if isinstance(t, MatrixOp):
        return operator_norm(t.matrix)
    if isinstance(t, TensorExtendedOp):
        return operator_norm_of(t.inner)
    fam = _diag_family(t)
    if fam is None:
        raise InvalidInput(f"not an operator: {type(t).__name__}")
    # shifts are isometries and the odd lift has blockwise norm |a_j|, so
    # every symbol-backed representation has norm sup |a_j|
    return symbol_sup_abs(fam[2])


def dense(t: Operator) -> np.ndarray:
    """Materialize a finite-dimensional operator as a matrix."""
    if isinstance(t, MatrixOp):
        return t.matrix
    if isinstance(t, TensorExtendedOp):
        return np.kron(np.eye(t.multiplicity), dense(t.inner))
    raise Unsupported(f"{type(t).__name__} has no finite dense form")


def truncated_dense(t: Operator, n: int) -> np.ndarray:
    """Compression of a symbol-backed operator to the first n basis vectors
    of its domain (the codomain keeps every reachable coordinate)."""
    if n < 1:
        raise InvalidInput("truncation size must be >= 1")
    fam = _diag_family(t)
    if fam is None:
        raise Unsupported(f"{type(t).__name__} has no symbol truncation")
    kind, k, sym = fam
    vals = symbol_values(sym, n)
    if kind == "diag":
        return np.diag(vals)
    if kind == "shift":
        out = np.zeros((n + k, n), dtype=np.complex128)
        out[np.arange(n) + k, np.arange(n)] = vals
        return out
    if kind == "coshift":
        if n <= k:
            raise InvalidInput("truncation size must exceed the shift order")
        out = np.zeros((n - k, n), dtype=np.complex128)
        out[np.arange(n - k), np.arange(n - k) + k] = vals[: n - k]
        return out
    # odd lift on the first n coordinates, basis ordered E then E
    block = np.diag(vals)
    zero = np.zeros_like(block)
    return np.block([[zero, block.conj().T], [block, zero]])


# ---------------------------------------------------------------------------
# the bounded transform and its inverse

def bounded_transform(t: Operator, tol: ToleranceConfig = DEFAULT_TOL) -> BoundedTransform:
    """F_t = t (1 + t*t)^{-1/2}, a contraction with the same graph data."""
    if isinstance(t, MatrixOp):
        a = t.matrix
        gram = a.conj().T @ a
        q = hermitian_apply(gram, lambda x: 1.0 / np.sqrt(1.0 + x), tol)
        f = a @ q
        nrm = operator_norm(f)
        if nrm > 1.0 + tol.eps_bounded:
            raise NumericalFailure(
                f"bounded transform norm {nrm!r} exceeds 1 beyond tolerance"
            )
        defect = np.eye(f.shape[1]) - f.conj().T @ f
        injective = bool(np.min(np.linalg.eigvalsh((defect + defect.conj().T) / 2.0)) > 0.0)
        return BoundedTransform(MatrixOp(f), injective)
    if isinstance(t, TensorExtendedOp):
        inner = bounded_transform(t.inner, tol)
        return BoundedTransform(
            TensorExtendedOp(inner.op, t.multiplicity), inner.defect_injective
        )
    fam = _diag_family(t)
    if fam is None:
        raise InvalidInput(f"not an operator: {type(t).__name__}")
    sym = fam[2]
    mapped = apply_map_to_symbol(sym, ScalarMap("bounded"))
    j = max(len(mapped.prefix), stable_index(mapped.tail))
    window = np.abs(symbol_values(mapped, j))
    injective = bool(np.all(1.0 - window**2 > 0.0)) if j else True
    return BoundedTransform(_rebuild(t, mapped), injective)


def _inverse_transform_symbol(sym: SymbolSpec, tol: ToleranceConfig) -> SymbolSpec:
    j = max(len(sym.prefix), stable_index(sym.tail))
    window = np.abs(symbol_values(sym, j))
    bad = np.nonzero(1.0 - window**2 <= tol.eps_rank)[0]
    if bad.size:
        raise NotInvertibleDefect(
            f"coordinate {int(bad[0]) + 1} has modulus {window[bad[0]]:.12g}; "
            "the defect 1 - F*F is numerically singular"
        )
    tail = sym.tail
    regime = _tail_regime(tail, j)
    cancels = isinstance(tail, MappedTail) and tail.chain[-1].name == "bounded"
    if not cancels and regime[0] not in ("zero",):
        if regime[0] == "const":
            mod = abs(regime[1])
        elif regime[0] == "real":
            _, v1, limit = regime
            mod = max(abs(v1), abs(limit))
        else:
            mod = np.inf
        if not 1.0 - mod * mod > tol.eps_rank:
            raise NotInvertibleDefect(
                "tail modulus reaches 1: the defect 1 - F*F is not invertible"
            )
    return apply_map_to_symbol(sym, ScalarMap("inv_bounded"))


def from_bounded_transform(
    f: BoundedTransform | Operator, tol: ToleranceConfig = DEFAULT_TOL
) -> Operator:
    """Inverse of the bounded transform: t = F (1 - F*F)^{-1/2}."""
    op = f.op if isinstance(f, BoundedTransform) else f
    if isinstance(op, MatrixOp):
        m = op.matrix
        defect = np.eye(m.shape[1]) - m.conj().T @ m
        wmin = float(np.min(np.linalg.eigvalsh((defect + defect.conj().T) / 2.0)))
        if wmin <= tol.eps_rank:
            raise NotInvertibleDefect(
                f"smallest eigenvalue of 1 - F*F is {wmin:.3e}; "
                "no bounded preimage exists at this tolerance"
            )
        q = hermitian_apply(defect, lambda x: 1.0 / np.sqrt(x), tol)
        return MatrixOp(m @ q)
    if isinstance(op, TensorExtendedOp):
        inner = from_bounded_transform(op.inner, tol)
        return TensorExtendedOp(inner, op.multiplicity)
    fam = _diag_family(op)
    if fam is None:
        raise InvalidInput(f"not an operator: {type(op).__name__}")
    return _rebuild(op, _inverse_transform_symbol(fam[2], tol))


def is_bounded(t: Operator, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Certified boundedness: the bounded transform stays strictly inside the
    unit ball.  Dense operators are bounded by construction."""
    if isinstance(t, (MatrixOp, TensorExtendedOp)):
        return True
    fam = _diag_family(t)
    if fam is None:
        raise InvalidInput(f"not an operator: {type(t).__name__}")
    fnorm = operator_norm_of(bounded_transform(t, tol).op)
    return bool(fnorm < 1.0 - tol.eps_bounded)


# ---------------------------------------------------------------------------
# spectral transforms of selfadjoint operators

def cayley_transform(t: Operator, tol: ToleranceConfig = DEFAULT_TOL) -> Operator:
    """(t - i)(t + i)^{-1}, unitary for selfadjoint t."""
    t = _normalize(t)
    if not is_selfadjoint(t, tol):
        raise NotSelfadjoint("Cayley transform requires a selfadjoint operator")
    if isinstance(t, MatrixOp):
        return MatrixOp(hermitian_apply(t.matrix, lambda x: (x - 1j) / (x + 1j), tol))
    if isinstance(t, DiagonalOp):
        return DiagonalOp(apply_map_to_symbol(t.symbol, ScalarMap("cayley")))
    if isinstance(t, TensorExtendedOp):
        return TensorExtendedOp(cayley_transform(t.inner, tol), t.multiplicity)
    raise Unsupported(
        f"Cayley transform of {type(t).__name__} is not representable here"
    )


def resolvent_operator(
    t: Operator, sign: int, tol: ToleranceConfig = DEFAULT_TOL
) -> Operator:
    """(t + sign*i)^{-1} for selfadjoint t; sign is +1 or -1."""
    t = _normalize(t)
    if sign not in (1, -1):
        raise InvalidInput("resolvent sign must be +1 or -1")
    if not is_selfadjoint(t, tol):
        raise NotSelfadjoint("the resolvent at -/+ i requires a selfadjoint operator")
    if isinstance(t, MatrixOp):
        return MatrixOp(hermitian_apply(t.matrix, lambda x: 1.0 / (x + sign * 1j), tol))
    if isinstance(t, DiagonalOp):
        return DiagonalOp(
            apply_map_to_symbol(t.symbol, ScalarMap("resolvent", float(sign)))
        )
    if isinstance(t, TensorExtendedOp):
        return TensorExtendedOp(resolvent_operator(t.inner, sign, tol), t.multiplicity)
    raise Unsupported(f"resolvent of {type(t).__name__} is not representable here")


def odd_lift(t: Operator) -> Operator:
    """Selfadjoint block lift [[0, t*], [t, 0]]."""
    t = _normalize(t)
    if isinstance(t, MatrixOp):
        a = t.matrix
        if a.shape[0] != a.shape[1]:
            raise ShapeMismatch("odd lift of a dense operator requires a square matrix")
        zero = np.zeros_like(a)
        return MatrixOp(np.block([[zero, a.conj().T], [a, zero]]))
    if isinstance(t, DiagonalOp):
        return OddDiagonalOp(t.symbol)
    raise Unsupported(f"odd lift of {type(t).__name__} is not representable here")


def tensor_extend(t: Operator, multiplicity: int) -> TensorExtendedOp:
    """1_{C^k} (x) t for a dense operator."""
    if not isinstance(t, MatrixOp):
        raise Unsupported("tensor extension is defined for dense operators")
    return TensorExtendedOp(t, multiplicity)


# ---------------------------------------------------------------------------
# named families

def fuglede_operator(n: int) -> DiagonalOp:
    """Selfadjoint diagonal with a_j = j except a_n = -n (n = 0 keeps the
    unperturbed operator).  Pairs of these realize gap-convergent sequences
    whose Riesz distances stay large."""
    if not isinstance(n, int) or n < 0:
        raise InvalidInput(f"n must be a nonnegative integer, got {n!r}")
    prefix = [complex(j) for j in range(1, n + 1)]
    if n >= 1:
        prefix[n - 1] = complex(-n)
    return DiagonalOp(symbol(prefix, _LINEAR_TAIL))


def density_approximant(
    t: Operator, n: int, tol: ToleranceConfig = DEFAULT_TOL
) -> Operator:
    """Bounded operator T_n with Riesz distance |F_t| / (n + 1) to t, obtained
    by shrinking the bounded transform by n/(n+1) and transforming back."""
    if not isinstance(n, int) or n < 1:
        raise InvalidInput(f"n must be a positive integer, got {n!r}")
    f = bounded_transform(t, tol)
    return from_bounded_transform(_scale_operator(f.op, n / (n + 1.0)), tol)


def _scale_operator(t: Operator, c: float) -> Operator:
    """c * t for real nonzero c, staying inside the representation class."""
    if isinstance(t, MatrixOp):
        return MatrixOp(c * t.matrix)
    if isinstance(t, TensorExtendedOp):
        return TensorExtendedOp(_scale_operator(t.inner, c), t.multiplicity)
    fam = _diag_family(t)
    if fam is None:
        raise InvalidInput(f"not an operator: {type(t).__name__}")
    return _rebuild(t, apply_map_to_symbol(fam[2], ScalarMap("scale", float(c))))
