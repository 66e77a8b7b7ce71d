"""Kernel dimensions, Fredholm index, and gap-continuous homotopies.

Index data comes from closed-form symbol analysis (zeros of the symbol, shift
order) or from numerical rank for dense blocks; range closedness is decided
symbolically from the tail family.  Homotopies interpolate within a single
representation family, route around degenerate interpolants through a
reference operator, and certify gap continuity by refining the sample grid
until every step is below the requested bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .config import DEFAULT_TOL, ToleranceConfig
from .errors import InvalidInput, NumericalFailure, Unsupported
from .linalg import numerical_rank
from .metrics import gap_sup_distance
from .operators import (
    CoShiftedDiagonalOp,
    DiagonalOp,
    MatrixOp,
    Operator,
    OddDiagonalOp,
    ShiftedDiagonalOp,
    TensorExtendedOp,
    _diag_family,
    _normalize,
)
from .symbols import (
    ConstTail,
    PolyTail,
    SymbolSpec,
    const_tail,
    poly_tail,
    symbol,
    symbol_value,
    symbol_zero_report,
)

# sentinel for infinite kernel/cokernel dimensions
INFINITE_DIM = 2**63 - 1

# refinement stops once a path holds this many samples
_MAX_SAMPLES = 2**14

# relative threshold below which an interpolated tail counts as degenerate
_HAZARD_REL = 1e-9


@dataclass(frozen=True)
class IndexReport:
    """Kernel data of one operator.  index == dim_ker - dim_coker whenever the
    operator is Fredholm; infinite dimensions use the INFINITE_DIM sentinel."""

    dim_ker: int
    dim_coker: int
    index: int
    fredholm: bool
    reason: str


@dataclass(frozen=True)
class HomotopyPath:
    """A sampled gap-continuous path between two operators of equal index."""

    lambdas: tuple[float, ...]
    samples: tuple[Operator, ...]
    indices: tuple[int, ...]
    step_gaps: tuple[float, ...]

    @property
    def index(self) -> int:
        return self.indices[0]

    @property
    def max_step_gap(self) -> float:
        return max(self.step_gaps) if self.step_gaps else 0.0


@dataclass(frozen=True)
class NoPath:
    """Certificate that no index-preserving path exists."""

    index_a: int
    index_b: int
    reason: str


PathResult = Union[HomotopyPath, NoPath]


# ---------------------------------------------------------------------------
# index

def kernel_dims(t: Operator, tol: ToleranceConfig = DEFAULT_TOL) -> tuple[int, int]:
    """(dim kernel, dim cokernel), with INFINITE_DIM for infinite values."""
    rep = _index_report(t, tol)
    return rep.dim_ker, rep.dim_coker


def fredholm_index(t: Operator, tol: ToleranceConfig = DEFAULT_TOL) -> IndexReport:
    return _index_report(t, tol)


def _index_report(t: Operator, tol: ToleranceConfig) -> IndexReport:
    if isinstance(t, MatrixOp):
        m, n = t.matrix.shape
        r = numerical_rank(t.matrix, tol.eps_rank)
        return IndexReport(
            dim_ker=n - r,
            dim_coker=m - r,
            index=n - m,
            fredholm=True,
            reason=f"dense {m}x{n} operator of numerical rank {r}",
        )
    if isinstance(t, TensorExtendedOp):
        inner = _index_report(t.inner, tol)
        k = t.multiplicity
        return IndexReport(
            dim_ker=k * inner.dim_ker,
            dim_coker=k * inner.dim_coker,
            index=k * inner.index,
            fredholm=inner.fredholm,
            reason=f"{k} copies of: {inner.reason}",
        )
    fam = _diag_family(t)
    if fam is None:
        raise InvalidInput(f"not an operator: {type(t).__name__}")
    kind, k, sym = fam
    zr = symbol_zero_report(sym, tol.eps_rank)
    if zr.tail_eventually_zero:
        return IndexReport(
            dim_ker=INFINITE_DIM,
            dim_coker=INFINITE_DIM,
            index=0,
            fredholm=False,
            reason="symbol tail is numerically zero: "
            "kernel and cokernel are infinite-dimensional",
        )
    if not zr.tail_bounded_away:
        z = zr.zero_count
        ker, coker = _family_dims(kind, k, z)
        return IndexReport(
            dim_ker=ker,
            dim_coker=coker,
            index=0,
            fredholm=False,
            reason="symbol tail approaches zero: the range is not closed",
        )
    z = zr.zero_count
    ker, coker = _family_dims(kind, k, z)
    reason = (
        f"symbol bounded away from zero beyond index {zr.window}; "
        f"{z} zero coordinate(s)"
    )
    if kind in ("shift", "coshift"):
        reason += f"; shift order {k}"
    if np.isfinite(zr.min_nonzero_abs) and zr.min_nonzero_abs <= 1e3 * tol.eps_rank:
        reason += (
            f"; warning: smallest retained modulus {zr.min_nonzero_abs:.3e} "
            f"sits close to the rank threshold {tol.eps_rank:.1e}"
        )
    return IndexReport(
        dim_ker=ker,
        dim_coker=coker,
        index=ker - coker,
        fredholm=True,
        reason=reason,
    )


def _family_dims(kind: str, k: int, z: int) -> tuple[int, int]:
    if kind == "diag":
        return z, z
    if kind == "shift":
        return z, k + z
    if kind == "coshift":
        return k + z, z
    if kind == "odd":
        return 2 * z, 2 * z
    raise InvalidInput(f"unknown symbol family {kind!r}")


# ---------------------------------------------------------------------------
# homotopy construction

@dataclass(frozen=True)
class _Segment:
    """Linear interpolation data for one leg of a path, at the symbol level."""

    prefix_a: np.ndarray
    prefix_b: np.ndarray
    kind: str                  # 'poly' | 'const'
    coeffs_a: np.ndarray | None = None
    coeffs_b: np.ndarray | None = None
    const_a: complex = 0.0
    const_b: complex = 0.0

    def at(self, lam: float) -> SymbolSpec:
        prefix = tuple((1.0 - lam) * self.prefix_a + lam * self.prefix_b)
        if self.kind == "poly":
            coeffs = (1.0 - lam) * self.coeffs_a + lam * self.coeffs_b
            return symbol(prefix, poly_tail(tuple(float(c) for c in coeffs)))
        v = (1.0 - lam) * self.const_a + lam * self.const_b
        return symbol(prefix, const_tail(v))


def _padded_prefixes(sym_a: SymbolSpec, sym_b: SymbolSpec):
    p = max(len(sym_a.prefix), len(sym_b.prefix))
    pa = np.asarray([symbol_value(sym_a, j) for j in range(1, p + 1)], dtype=np.complex128)
    pb = np.asarray([symbol_value(sym_b, j) for j in range(1, p + 1)], dtype=np.complex128)
    return pa, pb


def _as_poly_coeffs(tail) -> tuple[float, ...] | None:
    """Real-polynomial view of a tail, or None if it has none."""
    if isinstance(tail, PolyTail):
        return tail.coeffs
    if isinstance(tail, ConstTail) and tail.value.imag == 0.0:
        c = tail.value.real
        return (c,) if c != 0.0 else ()
    return None


def _poly_hazard(ca: np.ndarray, cb: np.ndarray) -> bool:
    """True when linear interpolation of the coefficient vectors degenerates:
    the whole vector passes near zero, or the leading coefficient changes sign
    (which would blow up certified windows along the way)."""
    scale = max(float(np.max(np.abs(ca))), float(np.max(np.abs(cb))))
    if scale == 0.0:
        return True
    candidates = [1.0]
    for x, y in zip(ca, cb):
        if x != y:
            lam = x / (x - y)
            if 0.0 < lam < 1.0:
                candidates.append(float(lam))
    for lam in candidates:
        vec = (1.0 - lam) * ca + lam * cb
        if float(np.max(np.abs(vec))) <= _HAZARD_REL * scale:
            return True
    la, lb = float(ca[-1]), float(cb[-1])
    if la != 0.0 and lb != 0.0 and (la > 0.0) != (lb > 0.0):
        return True
    return False


def _segment_distance_to_zero(a: complex, b: complex) -> float:
    """Distance from the segment [a, b] in the plane to the origin."""
    d = b - a
    denom = abs(d) ** 2
    if denom == 0.0:
        return abs(a)
    tproj = -((a.conjugate() * d).real) / denom
    tproj = min(1.0, max(0.0, tproj))
    return abs(a + tproj * d)


def _build_segments(sym_a: SymbolSpec, sym_b: SymbolSpec) -> list[_Segment]:
    pa, pb = _padded_prefixes(sym_a, sym_b)
    if isinstance(sym_a.tail, ConstTail) and isinstance(sym_b.tail, ConstTail):
        # nonzero constants live in the punctured plane, so a detour through a
        # point of large modulus always avoids zero; this also rescues real
        # constants of opposite signs, which the polynomial family cannot
        va, vb = sym_a.tail.value, sym_b.tail.value
        scale = max(abs(va), abs(vb))
        if _segment_distance_to_zero(va, vb) > _HAZARD_REL * scale:
            return [_Segment(pa, pb, "const", const_a=va, const_b=vb)]
        radius = max(scale, 1.0)
        best = None
        for cand in (radius, -radius, 1j * radius, -1j * radius):
            clearance = min(
                _segment_distance_to_zero(va, cand),
                _segment_distance_to_zero(cand, vb),
            )
            if best is None or clearance > best[0]:
                best = (clearance, cand)
        pr = (pa + pb) / 2.0
        return [
            _Segment(pa, pr, "const", const_a=va, const_b=best[1]),
            _Segment(pr, pb, "const", const_a=best[1], const_b=vb),
        ]
    ca = _as_poly_coeffs(sym_a.tail)
    cb = _as_poly_coeffs(sym_b.tail)
    if ca is not None and cb is not None:
        d = max(len(ca), len(cb), 1)
        va = np.zeros(d)
        vb = np.zeros(d)
        va[: len(ca)] = ca
        vb[: len(cb)] = cb
        if not _poly_hazard(va, vb):
            return [_Segment(pa, pb, "poly", va, vb)]
        # detour through a reference of one degree higher with unit leading
        # coefficient: along both legs the top coefficient never vanishes
        vr = np.zeros(d + 1)
        vr[:d] = (va + vb) / 2.0
        vr[d] = 1.0
        va2 = np.concatenate([va, [0.0]])
        vb2 = np.concatenate([vb, [0.0]])
        pr = (pa + pb) / 2.0
        return [
            _Segment(pa, pr, "poly", va2, vr),
            _Segment(pr, pb, "poly", vr, vb2),
        ]
    raise Unsupported(
        "tails of these endpoints do not admit a common interpolation family"
    )


def _symbol_rebuilder(t: Operator):
    t = _normalize(t)
    if isinstance(t, DiagonalOp):
        return lambda s: DiagonalOp(s)
    if isinstance(t, ShiftedDiagonalOp):
        k = t.k
        return lambda s: ShiftedDiagonalOp(k, s)
    if isinstance(t, CoShiftedDiagonalOp):
        k = t.k
        return lambda s: CoShiftedDiagonalOp(k, s)
    if isinstance(t, OddDiagonalOp):
        return lambda s: OddDiagonalOp(s)
    raise Unsupported(f"cannot rebuild {type(t).__name__} from a symbol")


def _make_sampler(t0: Operator, t1: Operator):
    """Callable lam -> Operator tracing a piecewise-linear path."""
    if isinstance(t0, MatrixOp) and isinstance(t1, MatrixOp):
        if t0.matrix.shape != t1.matrix.shape:
            raise Unsupported(
                "dense endpoints of different shapes admit no interpolation here"
            )
        a, b = t0.matrix, t1.matrix

        def dense_sampler(lam: float) -> Operator:
            return MatrixOp((1.0 - lam) * a + lam * b)

        return dense_sampler
    if isinstance(t0, TensorExtendedOp) and isinstance(t1, TensorExtendedOp):
        if t0.multiplicity != t1.multiplicity:
            raise Unsupported("tensor endpoints of different multiplicity")
        inner = _make_sampler(t0.inner, t1.inner)
        mult = t0.multiplicity

        def tensor_sampler(lam: float) -> Operator:
            return TensorExtendedOp(inner(lam), mult)

        return tensor_sampler
    fa = _diag_family(t0)
    fb = _diag_family(t1)
    if fa is None or fb is None or (fa[0], fa[1]) != (fb[0], fb[1]):
        raise Unsupported(
            f"no interpolation between {type(t0).__name__} and {type(t1).__name__}"
        )
    segments = _build_segments(fa[2], fb[2])
    rebuild = _symbol_rebuilder(t0)

    if len(segments) == 1:
        seg = segments[0]

        def symbol_sampler(lam: float) -> Operator:
            return rebuild(seg.at(lam))

        return symbol_sampler
    first, second = segments

    def routed_sampler(lam: float) -> Operator:
        if lam <= 0.5:
            return rebuild(first.at(2.0 * lam))
        return rebuild(second.at(2.0 * lam - 1.0))

    return routed_sampler


def _not_fredholm_message(which: str, rep: IndexReport) -> str:
    if rep.dim_ker == INFINITE_DIM:
        return f"{which} endpoint is not Fredholm: infinite-dimensional kernel ({rep.reason})"
    return f"{which} endpoint is not Fredholm: {rep.reason}"


def homotopy_path(
    t0: Operator,
    t1: Operator,
    steps: int = 101,
    eps_step: float = 0.05,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> PathResult:
    """Path of Fredholm operators from t0 to t1 with certified small gap steps.

    Returns NoPath when the endpoint indices differ (the index is a homotopy
    invariant, so no such path can exist); raises Unsupported when the
    endpoints admit no common interpolation family.
    """
    if not isinstance(steps, int) or steps < 2:
        raise InvalidInput(f"steps must be an integer >= 2, got {steps!r}")
    if not np.isfinite(eps_step) or eps_step <= 0.0:
        raise InvalidInput(f"eps_step must be positive, got {eps_step!r}")
    ra = fredholm_index(t0, tol)
    rb = fredholm_index(t1, tol)
    if not ra.fredholm:
        raise InvalidInput(_not_fredholm_message("first", ra))
    if not rb.fredholm:
        raise InvalidInput(_not_fredholm_message("second", rb))
    if ra.index != rb.index:
        return NoPath(
            index_a=ra.index,
            index_b=rb.index,
            reason=f"Fredholm index mismatch: {ra.index} vs {rb.index}",
        )
    sampler = _make_sampler(t0, t1)

    n = steps
    while True:
        lambdas = tuple(float(x) for x in np.linspace(0.0, 1.0, n))
        samples = tuple(sampler(lam) for lam in lambdas)
        indices = []
        for lam, op in zip(lambdas, samples):
            rep = fredholm_index(op, tol)
            if not rep.fredholm:
                raise NumericalFailure(
                    f"interpolant at lambda={lam:.6g} left the Fredholm class: {rep.reason}"
                )
            indices.append(rep.index)
        if len(set(indices)) != 1:
            raise NumericalFailure(
                "interpolation failed to preserve the index; this contradicts "
                "its construction and indicates a numerical problem"
            )
        gaps = []
        for a, b in zip(samples, samples[1:]):
            rep = gap_sup_distance(a, b, tol, err_target=eps_step / 4.0)
            gaps.append(rep.value + rep.certified_error)
        worst = max(gaps) if gaps else 0.0
        if worst <= eps_step:
            return HomotopyPath(
                lambdas=lambdas,
                samples=samples,
                indices=tuple(indices),
                step_gaps=tuple(gaps),
            )
        doubled = 2 * (n - 1) + 1
        if doubled > _MAX_SAMPLES:
            raise NumericalFailure(
                f"step gap {worst:.6g} still exceeds {eps_step:.6g} "
                f"after refining to {n} samples"
            )
        n = doubled


def validate_path(
    path: HomotopyPath, eps_step: float, tol: ToleranceConfig = DEFAULT_TOL
) -> bool:
    """Independently re-check a path: every sample Fredholm with one common
    index, every recomputed step gap within eps_step."""
    if not isinstance(path, HomotopyPath):
        raise InvalidInput("validate_path expects a HomotopyPath")
    reports = [fredholm_index(op, tol) for op in path.samples]
    if not all(r.fredholm for r in reports):
        return False
    if len({r.index for r in reports}) != 1:
        return False
    for a, b in zip(path.samples, path.samples[1:]):
        rep = gap_sup_distance(a, b, tol, err_target=eps_step / 4.0)
        if rep.value + rep.certified_error > eps_step:
            return False
    return True
