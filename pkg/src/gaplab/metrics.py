"""Gap, Riesz and resolvent metrics between operator representations.

Dense pairs are measured exactly (up to floating point) through the Hermitian
functional calculus.  Symbol-backed pairs reduce to suprema of per-coordinate
scalar streams; those are evaluated exactly on a finite window and bounded
beyond it by the closed-form tail limits, so every report carries a certified
truncation error.  Pairs from different representation families or different
shift orders have no certified algorithm and raise Unsupported.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL, ToleranceConfig
from .errors import (
    InvalidInput,
    NotBounded,
    NotSelfadjoint,
    NumericalFailure,
    ShapeMismatch,
    Unsupported,
)
from .linalg import hermitian_apply, operator_norm
from .operators import (
    MatrixOp,
    Operator,
    TensorExtendedOp,
    _diag_family,
    adjoint,
    bounded_transform,
    is_bounded,
    is_selfadjoint,
    operator_norm_of,
)
from .symbols import (
    SymbolSpec,
    derived_tail_profile,
    metric_stream,
    pair_window,
    symbol_values,
    tails_identical,
)

_METHODS = ("projection", "sup_form", "riesz", "tilde")


@dataclass(frozen=True)
class MetricReport:
    """A distance value together with its certification.

    The true distance lies in [value, value + certified_error].  For dense
    pairs the error is zero and truncation_index is None; for symbol pairs
    truncation_index records the window behind the certificate.
    """

    value: float
    method: str
    certified_error: float = 0.0
    truncation_index: int | None = None

    def __post_init__(self) -> None:
        if self.method not in _METHODS:
            raise InvalidInput(f"unknown metric method {self.method!r}")
        if not np.isfinite(self.value) or self.value < 0.0:
            raise InvalidInput(f"metric value must be finite and >= 0, got {self.value!r}")
        if not np.isfinite(self.certified_error) or self.certified_error < 0.0:
            raise InvalidInput("certified_error must be finite and >= 0")


@dataclass(frozen=True)
class EquivalenceConstants:
    """Constants m2 ||T - S|| <= gap(T, S) <= m1 ||T - S|| for bounded pairs."""

    m1: float
    m2: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.m1) and np.isfinite(self.m2)):
            raise InvalidInput("equivalence constants must be finite")
        if self.m1 <= 0.0 or self.m2 <= 0.0:
            raise InvalidInput("equivalence constants must be positive")


# ---------------------------------------------------------------------------
# dense building blocks

def _square_resolvent(a: np.ndarray, tol: ToleranceConfig) -> np.ndarray:
    """(1 + a* a)^{-1} through the Hermitian calculus."""
    return hermitian_apply(a.conj().T @ a, lambda x: 1.0 / (1.0 + x), tol)


def graph_projection(t: Operator, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Orthogonal projection onto the graph of a dense operator, as a block
    matrix on domain (+) codomain."""
    if not isinstance(t, MatrixOp):
        raise Unsupported("the graph projection is computed for dense operators only")
    a = t.matrix
    m, n = a.shape
    r = _square_resolvent(a, tol)
    rs = hermitian_apply(a @ a.conj().T, lambda x: 1.0 / (1.0 + x), tol)
    return np.block(
        [
            [r, a.conj().T @ rs],
            [a @ r, np.eye(m) - rs],
        ]
    )


def complement_residual(t: Operator, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Residual of the graph-complement identity: the graph of the adjoint,
    rotated by (x, y) -> (-y, x), must be the orthocomplement of the graph."""
    if not isinstance(t, MatrixOp):
        raise Unsupported("the graph-complement identity is checked for dense operators")
    a = t.matrix
    m, n = a.shape
    p1 = graph_projection(t, tol)
    p2 = graph_projection(adjoint(t), tol)
    u = np.block(
        [
            [np.zeros((n, m)), -np.eye(n)],
            [np.eye(m), np.zeros((m, n))],
        ]
    )
    return operator_norm(np.eye(n + m) - p1 - u @ p2 @ u.conj().T)


def _dense_sup_terms(a: np.ndarray, b: np.ndarray, tol: ToleranceConfig):
    ra = _square_resolvent(a, tol)
    rb = _square_resolvent(b, tol)
    rsa = hermitian_apply(a @ a.conj().T, lambda x: 1.0 / (1.0 + x), tol)
    rsb = hermitian_apply(b @ b.conj().T, lambda x: 1.0 / (1.0 + x), tol)
    return (
        operator_norm(ra - rb),
        operator_norm(rsa - rsb),
        operator_norm(a @ ra - b @ rb),
    )


def _require_same_shape(t: MatrixOp, s: MatrixOp) -> None:
    if t.matrix.shape != s.matrix.shape:
        raise ShapeMismatch(
            f"operators act between different spaces: {t.matrix.shape} vs {s.matrix.shape}"
        )


# ---------------------------------------------------------------------------
# symbol building blocks

def _diag_pair(t: Operator, s: Operator) -> tuple[SymbolSpec, SymbolSpec]:
    fa = _diag_family(t)
    fb = _diag_family(s)
    if fa is None or fb is None:
        raise Unsupported(
            "no certified metric between representations "
            f"{type(t).__name__} and {type(s).__name__}"
        )
    if (fa[0], fa[1]) != (fb[0], fb[1]):
        raise Unsupported(
            f"no certified metric between family {fa[0]} (order {fa[1]}) "
            f"and family {fb[0]} (order {fb[1]})"
        )
    return fa[2], fb[2]


# window refinement policy: enlarge the certification window until the
# bracket is tighter than max(absolute, relative * value), or the cap is hit
_ABS_ERR_TARGET = 1e-6
_REL_ERR_TARGET = 1e-3
_WINDOW_CAP = 2**20


def _window_sup(term: str, sym_a: SymbolSpec, sym_b: SymbolSpec, j: int) -> float:
    if not j:
        return 0.0
    da = metric_stream(term, symbol_values(sym_a, j))
    db = metric_stream(term, symbol_values(sym_b, j))
    return float(np.max(np.abs(da - db)))


def _certified_sup(
    term: str,
    sym_a: SymbolSpec,
    sym_b: SymbolSpec,
    err_target: float | None = None,
):
    """(lower, upper, window) bracketing sup_j |stream(a_j) - stream(b_j)|.

    Identical tails cancel exactly beyond the prefixes, making the bracket
    tight at the minimal window.  Otherwise the window grows geometrically
    until the tail contribution is certified below the error target.
    """
    j = pair_window(sym_a, sym_b)
    if tails_identical(sym_a.tail, sym_b.tail):
        win = _window_sup(term, sym_a, sym_b, j)
        return win, win, j
    while True:
        win = _window_sup(term, sym_a, sym_b, j)
        la, ea = derived_tail_profile(term, sym_a.tail, j)
        lb, eb = derived_tail_profile(term, sym_b.tail, j)
        ld = abs(la - lb)
        lower = max(win, ld)
        upper = max(win, ld + ea + eb)
        target = (
            err_target
            if err_target is not None
            else max(_ABS_ERR_TARGET, _REL_ERR_TARGET * lower)
        )
        if upper - lower <= target or j >= _WINDOW_CAP:
            return lower, upper, j
        j = max(2 * j, 16)


def _sup_report(method: str, pieces) -> MetricReport:
    lower = max(p[0] for p in pieces)
    upper = max(p[1] for p in pieces)
    j = max(p[2] for p in pieces)
    return MetricReport(lower, method, upper - lower, j if j else None)


# ---------------------------------------------------------------------------
# the metrics

def gap_sup_distance(
    t: Operator,
    s: Operator,
    tol: ToleranceConfig = DEFAULT_TOL,
    err_target: float | None = None,
) -> MetricReport:
    """Supremum form of the gap: the largest of the three resolvent-type
    difference norms |R_t - R_s|, |R_t* - R_s*|, |t R_t - s R_s|.

    err_target, when given, steers how tight the certified bracket must be
    for symbol-backed pairs (dense pairs are always exact)."""
    if isinstance(t, MatrixOp) and isinstance(s, MatrixOp):
        _require_same_shape(t, s)
        r, rs, g = _dense_sup_terms(t.matrix, s.matrix, tol)
        return MetricReport(max(r, rs, g), "sup_form")
    if isinstance(t, TensorExtendedOp) and isinstance(s, TensorExtendedOp):
        _require_tensor_match(t, s)
        return gap_sup_distance(t.inner, s.inner, tol, err_target)
    sym_a, sym_b = _diag_pair(t, s)
    # for equal shift orders the codomain term duplicates the domain term, so
    # two scalar streams suffice
    return _sup_report(
        "sup_form",
        [
            _certified_sup("R", sym_a, sym_b, err_target),
            _certified_sup("G", sym_a, sym_b, err_target),
        ],
    )


def gap_projection_distance(
    t: Operator, s: Operator, tol: ToleranceConfig = DEFAULT_TOL
) -> MetricReport:
    """Gap as the norm distance between graph projections (dense pairs only)."""
    if isinstance(t, MatrixOp) and isinstance(s, MatrixOp):
        _require_same_shape(t, s)
        value = operator_norm(graph_projection(t, tol) - graph_projection(s, tol))
        return MetricReport(value, "projection")
    raise Unsupported("the projection form of the gap is computed for dense pairs only")


def riesz_distance(
    t: Operator,
    s: Operator,
    tol: ToleranceConfig = DEFAULT_TOL,
    err_target: float | None = None,
) -> MetricReport:
    """Norm distance between bounded transforms."""
    if isinstance(t, MatrixOp) and isinstance(s, MatrixOp):
        _require_same_shape(t, s)
        fa = bounded_transform(t, tol).op.matrix
        fb = bounded_transform(s, tol).op.matrix
        return MetricReport(operator_norm(fa - fb), "riesz")
    if isinstance(t, TensorExtendedOp) and isinstance(s, TensorExtendedOp):
        _require_tensor_match(t, s)
        return riesz_distance(t.inner, s.inner, tol, err_target)
    sym_a, sym_b = _diag_pair(t, s)
    return _sup_report("riesz", [_certified_sup("F", sym_a, sym_b, err_target)])


def tilde_distance(
    t: Operator,
    s: Operator,
    tol: ToleranceConfig = DEFAULT_TOL,
    err_target: float | None = None,
) -> MetricReport:
    """Resolvent metric |(t+i)^{-1} - (s+i)^{-1}| for selfadjoint pairs,
    cross-checked against half the Cayley-transform distance."""
    if not (is_selfadjoint(t, tol) and is_selfadjoint(s, tol)):
        raise NotSelfadjoint("the resolvent metric requires selfadjoint operators")
    if isinstance(t, MatrixOp) and isinstance(s, MatrixOp):
        _require_same_shape(t, s)
        ra = hermitian_apply(t.matrix, lambda x: 1.0 / (x + 1j), tol)
        rb = hermitian_apply(s.matrix, lambda x: 1.0 / (x + 1j), tol)
        ca = hermitian_apply(t.matrix, lambda x: (x - 1j) / (x + 1j), tol)
        cb = hermitian_apply(s.matrix, lambda x: (x - 1j) / (x + 1j), tol)
        value = operator_norm(ra - rb)
        cross = operator_norm(ca - cb) / 2.0
        if abs(value - cross) > tol.eps_residual:
            raise NumericalFailure(
                f"resolvent route {value!r} and Cayley route {cross!r} disagree"
            )
        return MetricReport(value, "tilde")
    if isinstance(t, TensorExtendedOp) and isinstance(s, TensorExtendedOp):
        _require_tensor_match(t, s)
        return tilde_distance(t.inner, s.inner, tol, err_target)
    sym_a, sym_b = _diag_pair(t, s)
    j = pair_window(sym_a, sym_b)
    if j:
        va = symbol_values(sym_a, j)
        vb = symbol_values(sym_b, j)
        d_res = np.abs(metric_stream("RES", va) - metric_stream("RES", vb))
        d_cay = np.abs(metric_stream("CAY", va) - metric_stream("CAY", vb)) / 2.0
        mismatch = float(np.max(np.abs(d_res - d_cay)))
        if mismatch > tol.eps_residual:
            raise NumericalFailure(
                f"resolvent and Cayley routes disagree by {mismatch:.3e} on the window"
            )
    piece = _certified_sup("RES", sym_a, sym_b, err_target)
    return _sup_report("tilde", [piece])


def equivalence_constants(
    t: Operator, s: Operator, tol: ToleranceConfig = DEFAULT_TOL
) -> EquivalenceConstants:
    """Constants tying the gap to the norm distance for a bounded pair."""
    if not (is_bounded(t, tol) and is_bounded(s, tol)):
        raise NotBounded("norm-gap equivalence constants require bounded operators")
    nt = operator_norm_of(t)
    ns = operator_norm_of(s)
    m1 = max(nt + ns, 1.0 + ns * (ns + nt))
    m2 = 1.0 / ((1.0 + nt * nt) * (1.0 + ns))
    return EquivalenceConstants(m1=m1, m2=m2)


def _require_tensor_match(t: TensorExtendedOp, s: TensorExtendedOp) -> None:
    if t.multiplicity != s.multiplicity:
        raise Unsupported(
            "no certified metric between tensor extensions of different multiplicity"
        )
