"""Seeded property battery: every library invariant, one JSON report.

Five independent PCG64 streams drive the ensembles (dense trials, diagonal
trials, shift-index oracle, connectivity paths, refinement probes), so the
report for a fixed (seed, trials, dim_max) is reproducible run to run.
Inequalities between certified quantities flag only provable violations:
the lower end of one bracket must exceed the upper end of the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOL, ToleranceConfig
from .descriptors import descriptor_dict, to_descriptor
from .ensemble import (
    random_bounded_diagonal,
    random_diagonal,
    random_fredholm_diagonal,
    random_hermitian,
    random_matrix,
    random_shifted,
    spawn_rngs,
)
from .errors import GapLabError, InvalidInput
from .experiments import fuglede_rows
from .fredholm import HomotopyPath, fredholm_index, homotopy_path, kernel_dims, validate_path
from .linalg import hermitian_apply, numerical_rank, operator_norm, svd_factor
from .metrics import (
    complement_residual,
    equivalence_constants,
    gap_projection_distance,
    gap_sup_distance,
    graph_projection,
    riesz_distance,
    tilde_distance,
)
from .operators import (
    DiagonalOp,
    MatrixOp,
    adjoint,
    bounded_transform,
    cayley_transform,
    dense,
    from_bounded_transform,
    is_bounded,
    is_selfadjoint,
    odd_lift,
    operator_norm_of,
    resolvent_operator,
    tensor_extend,
    truncated_dense,
)
from .symbols import poly_tail, symbol, symbol_values

_MAX_DETAILS = 10

# fixed-size sub-ensembles shrink with small trial counts to keep short runs fast
_SHIFT_ORACLE_COUNT = 200
_CONNECTIVITY_COUNT = 50
_REFINEMENT_COUNT = 5
_FUGLEDE_SWEEP = 1000


@dataclass
class _Prop:
    name: str
    passes: int = 0
    failures: int = 0
    max_residual: float = 0.0
    extras: dict = field(default_factory=dict)
    details: list = field(default_factory=list)

    def check(self, ok: bool, residual: float = 0.0, operators=()) -> None:
        residual = float(residual)
        if math.isfinite(residual):
            self.max_residual = max(self.max_residual, residual)
        if ok:
            self.passes += 1
            return
        self.failures += 1
        if len(self.details) < _MAX_DETAILS:
            detail = {"property": self.name, "residual": residual}
            descs = _describe(operators)
            if descs:
                detail["operators"] = descs
            self.details.append(detail)

    def bound(self, residual: float, tolerance: float, operators=()) -> None:
        self.check(residual <= tolerance, residual, operators)

    def ratio(self, key: str, value: float, mode: str) -> None:
        v = float(value)
        if not math.isfinite(v):
            return
        cur = self.extras.get(key)
        if cur is None or (v > cur if mode == "max" else v < cur):
            self.extras[key] = v

    def to_json(self) -> dict:
        out = {
            "passes": self.passes,
            "failures": self.failures,
            "max_residual": self.max_residual,
        }
        out.update(self.extras)
        return out


def _describe(operators) -> list:
    out = []
    for op in operators:
        try:
            out.append(descriptor_dict(to_descriptor(op)))
        except Exception:
            continue
    return out


def _minimize_matrix_pair(a: MatrixOp, b: MatrixOp, violates):
    """Greedy shrink of a violating dense pair: drop a row, a column, or a
    matched row/column pair while the violation survives."""
    am, bm = a.matrix, b.matrix
    changed = True
    while changed and am.size > 1:
        changed = False
        m, n = am.shape
        moves = []
        for i in range(m):
            moves.append(((i,), (0,)))
        for j in range(n):
            moves.append(((j,), (1,)))
        if m == n:
            for i in range(m):
                moves.append(((i, i), (0, 1)))
        for idx, axes in moves:
            aa, bb = am, bm
            for i, ax in zip(idx, axes):
                if aa.shape[ax] <= 1:
                    aa = None
                    break
                aa = np.delete(aa, i, axis=ax)
                bb = np.delete(bb, i, axis=ax)
            if aa is None:
                continue
            try:
                if violates(MatrixOp(aa), MatrixOp(bb)):
                    am, bm = aa, bb
                    changed = True
                    break
            except GapLabError:
                continue
    return MatrixOp(am), MatrixOp(bm)


def _pair_bound(prop: _Prop, a: MatrixOp, b: MatrixOp, resid_fn, tolerance: float) -> None:
    r = resid_fn(a, b)
    if r <= tolerance:
        prop.check(True, r)
        return
    ma, mb = _minimize_matrix_pair(a, b, lambda x, y: resid_fn(x, y) > tolerance)
    prop.check(False, r, (ma, mb))


def _props(names) -> dict:
    return {n: _Prop(n) for n in names}


_PROPERTY_NAMES = (
    "svd_reconstruction",
    "operator_norm_svd_agreement",
    "hermitian_apply_identity",
    "inverse_sqrt_defect",
    "transform_round_trip",
    "transform_adjoint_preservation",
    "transform_contraction",
    "cayley_unitarity",
    "cayley_resolvent_identity",
    "resolvent_difference_identity",
    "odd_lift_square_identity",
    "inverse_sqrt_graph",
    "projection_laws",
    "block_sandwich",
    "resolvent_sandwich",
    "norm_gap_equivalence",
    "riesz_dominates_gap",
    "gap_openness_of_bounded",
    "odd_lift_isometry",
    "tensor_isometry",
    "metric_symmetry",
    "triangle_inequality",
    "fuglede_family",
    "index_additivity",
    "path_index_invariance",
    "shift_index_oracle",
    "selfadjoint_connectivity",
    "refinement_monotone",
    "refinement_subdivision_bound",
)


def _matrix_trial(rng: np.random.Generator, dim_max: int, tol: ToleranceConfig, P: dict) -> None:
    d = int(rng.integers(1, dim_max + 1))
    a = random_matrix(rng, d, d)
    b = random_matrix(rng, d, d)
    c = random_matrix(rng, d, d)
    m, n = int(rng.integers(1, dim_max + 1)), int(rng.integers(1, dim_max + 1))
    rect = random_matrix(rng, m, n)
    rect2 = random_matrix(rng, int(rng.integers(1, dim_max + 1)), int(rng.integers(1, dim_max + 1)))
    h1 = random_hermitian(rng, d)
    h2 = random_hermitian(rng, d)
    h3 = random_hermitian(rng, d)

    mat = rect.matrix
    u, s, v = svd_factor(mat)
    nm = operator_norm(mat)
    P["svd_reconstruction"].bound(
        operator_norm(u @ np.diag(s) @ v.conj().T - mat) / (1.0 + nm),
        tol.eps_residual,
        (rect,),
    )
    smax = float(s[0]) if s.size else 0.0
    P["operator_norm_svd_agreement"].bound(
        abs(nm - smax) / max(1.0, smax), 1e-12, (rect,)
    )
    hm = h1.matrix
    P["hermitian_apply_identity"].bound(
        operator_norm(hermitian_apply(hm, lambda x: x, tol) - hm)
        / (1.0 + operator_norm(hm)),
        tol.eps_residual,
        (h1,),
    )
    gram = mat.conj().T @ mat
    eye = np.eye(gram.shape[0])
    q = hermitian_apply(gram, lambda x: 1.0 / np.sqrt(1.0 + x), tol)
    P["inverse_sqrt_defect"].bound(
        operator_norm(q @ q @ (eye + gram) - eye), 1e-8, (rect,)
    )
    r_graph = hermitian_apply(gram, lambda x: 1.0 / (1.0 + x), tol)
    P["inverse_sqrt_graph"].bound(operator_norm(q @ q - r_graph), 1e-8, (rect,))

    f_a = bounded_transform(a, tol)
    rt = from_bounded_transform(f_a, tol)
    P["transform_round_trip"].bound(
        operator_norm(rt.matrix - a.matrix) / (1.0 + operator_norm(a.matrix)),
        1e-8,
        (a,),
    )
    P["transform_adjoint_preservation"].bound(
        operator_norm(
            bounded_transform(adjoint(a), tol).op.matrix
            - adjoint(f_a.op).matrix
        ),
        1e-10,
        (a,),
    )
    nf = operator_norm(f_a.op.matrix)
    P["transform_contraction"].check(
        nf <= 1.0 + 1e-12 and is_bounded(a, tol), max(0.0, nf - 1.0), (a,)
    )

    cay = dense(cayley_transform(h1, tol))
    P["cayley_unitarity"].bound(
        operator_norm(cay.conj().T @ cay - np.eye(d)), 1e-10, (h1,)
    )
    res1 = dense(resolvent_operator(h1, 1, tol))
    P["cayley_resolvent_identity"].bound(
        operator_norm(cay - (np.eye(d) - 2j * res1)), 1e-10, (h1,)
    )
    cay2 = dense(cayley_transform(h2, tol))
    res2 = dense(resolvent_operator(h2, 1, tol))
    P["resolvent_difference_identity"].bound(
        operator_norm((res1 - res2) - 0.5j * (cay - cay2)), 1e-10, (h1, h2)
    )

    lift = odd_lift(a)
    lm = dense(lift)
    am = a.matrix
    block = np.block(
        [
            [np.eye(d) + am.conj().T @ am, np.zeros((d, d))],
            [np.zeros((d, d)), np.eye(d) + am @ am.conj().T],
        ]
    )
    lift_resid = operator_norm((np.eye(2 * d) + lm @ lm) - block) / (
        1.0 + operator_norm(am) ** 2
    )
    P["odd_lift_square_identity"].check(
        is_selfadjoint(lift, tol) and lift_resid <= 1e-10, lift_resid, (a,)
    )

    proj = graph_projection(rect, tol)
    P["projection_laws"].bound(
        max(
            operator_norm(proj @ proj - proj),
            operator_norm(proj - proj.conj().T),
            complement_residual(rect, tol),
        ),
        1e-10,
        (rect,),
    )

    g = gap_sup_distance(a, b, tol).value

    def _block_resid(x, y):
        gs = gap_sup_distance(x, y, tol).value
        gp = gap_projection_distance(x, y, tol).value
        return max(gs - gp, gp - 2.0 * gs)

    gp = gap_projection_distance(a, b, tol).value
    _pair_bound(P["block_sandwich"], a, b, _block_resid, 1e-10)
    if g > 1e-12:
        P["block_sandwich"].ratio("min_ratio", gp / g, "min")
        P["block_sandwich"].ratio("max_ratio", gp / g, "max")

    nd = operator_norm(a.matrix - b.matrix)
    eq = equivalence_constants(a, b, tol)
    eq_rev = equivalence_constants(b, a, tol)
    m1_sharp = min(eq.m1, eq_rev.m1)
    m2_sharp = max(eq.m2, eq_rev.m2)

    def _equiv_resid(x, y):
        e = equivalence_constants(x, y, tol)
        er = equivalence_constants(y, x, tol)
        gs = gap_sup_distance(x, y, tol).value
        dd = operator_norm(x.matrix - y.matrix)
        return max(
            gs - e.m1 * dd,
            e.m2 * dd - gs,
            gs - min(e.m1, er.m1) * dd,
            max(e.m2, er.m2) * dd - gs,
        )

    _pair_bound(P["norm_gap_equivalence"], a, b, _equiv_resid, 1e-10)
    if nd > 1e-12:
        P["norm_gap_equivalence"].ratio("max_ratio_upper", g / (eq.m1 * nd), "max")
        P["norm_gap_equivalence"].ratio("max_ratio_upper_sharp", g / (m1_sharp * nd), "max")
        if g > 1e-12:
            P["norm_gap_equivalence"].ratio("min_ratio_lower", g / (eq.m2 * nd), "min")
            P["norm_gap_equivalence"].ratio("min_ratio_lower_sharp", g / (m2_sharp * nd), "min")

    def _riesz_resid(x, y):
        sig = riesz_distance(x, y, tol).value
        return gap_sup_distance(x, y, tol).value - (2.0 * sig + math.sqrt(2.0 * sig))

    _pair_bound(P["riesz_dominates_gap"], a, b, _riesz_resid, 1e-10)

    def _sandwich_resid(x, y):
        td = tilde_distance(x, y, tol).value
        gh = gap_sup_distance(x, y, tol).value
        return max(0.5 * td - gh, gh - td)

    td = tilde_distance(h1, h2, tol).value
    gh = gap_sup_distance(h1, h2, tol).value
    _pair_bound(P["resolvent_sandwich"], h1, h2, _sandwich_resid, 1e-10)
    if td > 1e-12:
        P["resolvent_sandwich"].ratio("min_ratio", gh / td, "min")
        P["resolvent_sandwich"].ratio("max_ratio", gh / td, "max")

    def _odd_resid(x, y):
        return abs(
            gap_sup_distance(odd_lift(x), odd_lift(y), tol).value
            - gap_sup_distance(x, y, tol).value
        )

    _pair_bound(P["odd_lift_isometry"], a, b, _odd_resid, 1e-10)

    worst_tensor = 0.0
    for k in (2, 3):
        gk = gap_sup_distance(
            MatrixOp(np.kron(np.eye(k), a.matrix)),
            MatrixOp(np.kron(np.eye(k), b.matrix)),
            tol,
        ).value
        worst_tensor = max(worst_tensor, abs(gk - g))
        delegated = gap_sup_distance(tensor_extend(a, k), tensor_extend(b, k), tol).value
        worst_tensor = max(worst_tensor, abs(delegated - g))
    P["tensor_isometry"].bound(worst_tensor, 1e-12, (a, b))

    sym_resid = max(
        abs(g - gap_sup_distance(b, a, tol).value),
        abs(riesz_distance(a, b, tol).value - riesz_distance(b, a, tol).value),
        abs(gp - gap_projection_distance(b, a, tol).value),
        abs(td - tilde_distance(h2, h1, tol).value),
    )
    P["metric_symmetry"].bound(sym_resid, 1e-10, (a, b))

    tri_resid = max(
        gap_sup_distance(a, c, tol).value
        - g
        - gap_sup_distance(b, c, tol).value,
        riesz_distance(a, c, tol).value
        - riesz_distance(a, b, tol).value
        - riesz_distance(b, c, tol).value,
        gap_projection_distance(a, c, tol).value
        - gp
        - gap_projection_distance(b, c, tol).value,
        tilde_distance(h1, h3, tol).value
        - td
        - tilde_distance(h2, h3, tol).value,
    )
    P["triangle_inequality"].bound(tri_resid, 1e-10, (a, b, c))

    r1 = fredholm_index(rect, tol)
    r2 = fredholm_index(rect2, tol)
    m2_, n2_ = rect2.matrix.shape
    summed = MatrixOp(
        np.block(
            [
                [mat, np.zeros((m, n2_))],
                [np.zeros((m2_, n)), rect2.matrix],
            ]
        )
    )
    rsum = fredholm_index(summed, tol)
    P["index_additivity"].check(
        rsum.index == r1.index + r2.index, 0.0, (rect, rect2)
    )

    rect3 = random_matrix(rng, m, n)
    path = homotopy_path(rect, rect3, steps=5, eps_step=2.0, tol=tol)
    ok = (
        isinstance(path, HomotopyPath)
        and all(i == n - m for i in path.indices)
        and validate_path(path, 2.0, tol)
    )
    P["path_index_invariance"].check(ok, 0.0, (rect, rect3))


def _diag_trial(rng: np.random.Generator, tol: ToleranceConfig, P: dict) -> None:
    d = random_diagonal(rng)
    rt = from_bounded_transform(bounded_transform(d, tol), tol)
    window = max(len(d.symbol.prefix), 8) + 8
    resid = float(
        np.max(
            np.abs(symbol_values(rt.symbol, window) - symbol_values(d.symbol, window))
        )
        / (1.0 + float(np.max(np.abs(symbol_values(d.symbol, window)))))
    )
    P["transform_round_trip"].bound(resid, 1e-8, (d,))

    f_adj = bounded_transform(adjoint(d), tol).op
    adj_f = adjoint(bounded_transform(d, tol).op)
    resid = float(
        np.max(
            np.abs(symbol_values(f_adj.symbol, window) - symbol_values(adj_f.symbol, window))
        )
    )
    P["transform_adjoint_preservation"].bound(resid, 1e-10, (d,))

    nf = operator_norm_of(bounded_transform(d, tol).op)
    P["transform_contraction"].check(
        nf <= 1.0 + 1e-12 and is_bounded(d, tol) == (nf < 1.0 - tol.eps_bounded),
        max(0.0, nf - 1.0),
        (d,),
    )

    sa = random_fredholm_diagonal(rng)
    sb = random_fredholm_diagonal(rng)
    cay = cayley_transform(sa, tol)
    resid = float(np.max(np.abs(np.abs(symbol_values(cay.symbol, window)) - 1.0)))
    P["cayley_unitarity"].bound(resid, 1e-12, (sa,))

    td = tilde_distance(sa, sb, tol)
    gh = gap_sup_distance(sa, sb, tol)
    # certified comparison: only a bracket-provable violation counts
    resid = max(
        0.5 * td.value - (gh.value + gh.certified_error),
        gh.value - (td.value + td.certified_error),
    )
    P["resolvent_sandwich"].bound(resid, 1e-10, (sa, sb))

    sig = riesz_distance(sa, sb, tol)
    sig_hi = sig.value + sig.certified_error
    P["riesz_dominates_gap"].bound(
        gh.value - (2.0 * sig_hi + math.sqrt(2.0 * sig_hi)), 1e-10, (sa, sb)
    )

    bounded_s = random_bounded_diagonal(rng)
    t_any = random_diagonal(rng)
    fs = operator_norm_of(bounded_transform(bounded_s, tol).op)
    threshold = 1.0 - fs * fs
    try:
        rep = gap_sup_distance(t_any, bounded_s, tol)
    except GapLabError:
        return
    if rep.value + rep.certified_error < threshold - 1e-10:
        P["gap_openness_of_bounded"].check(is_bounded(t_any, tol), 0.0, (t_any, bounded_s))
        P["gap_openness_of_bounded"].extras["informative_checks"] = (
            P["gap_openness_of_bounded"].extras.get("informative_checks", 0) + 1
        )
    else:
        P["gap_openness_of_bounded"].check(True, 0.0)


def _fuglede_block(tol: ToleranceConfig, P: dict) -> None:
    rows = fuglede_rows(_FUGLEDE_SWEEP, tol)
    prop = P["fuglede_family"]
    worst = 0.0
    prev = math.inf
    trend_ok = True
    for n_, dt, gs, rz in rows:
        worst = max(
            worst,
            abs(dt - 2.0 * n_ / (1.0 + n_ * n_)),
            abs(gs - 2.0 * n_ / (1.0 + n_ * n_)),
            abs(rz - 2.0 * n_ / math.sqrt(1.0 + n_ * n_)),
        )
        trend_ok = trend_ok and dt < prev
        prev = dt
        P["resolvent_sandwich"].bound(max(0.5 * dt - gs, gs - dt), 1e-10)
        P["riesz_dominates_gap"].bound(gs - (2.0 * rz + math.sqrt(2.0 * rz)), 1e-10)
    last = rows[-1]
    prop.check(
        worst <= 1e-12 and trend_ok and last[1] < 2.1e-3 and last[3] > 1.999, worst
    )
    prop.extras["max_formula_residual"] = worst


def _shift_oracle_block(rng: np.random.Generator, trials: int, tol: ToleranceConfig, P: dict) -> None:
    prop = P["shift_index_oracle"]
    count = min(_SHIFT_ORACLE_COUNT, max(10, trials))
    for _ in range(count):
        t = random_shifted(rng)
        rep = fredholm_index(t, tol)
        ker, coker = kernel_dims(t, tol)
        n_tr = len(t.symbol.prefix) + t.k + 16
        trunc = truncated_dense(t, n_tr)
        r = numerical_rank(trunc, tol.eps_rank)
        ker_bf = n_tr - r
        coker_bf = (n_tr + t.k) - r
        ok = (
            rep.fredholm
            and rep.index == -t.k
            and (ker, coker) == (ker_bf, coker_bf)
            and rep.index == ker_bf - coker_bf
        )
        prop.check(ok, 0.0, (t,))


def _connectivity_block(rng: np.random.Generator, trials: int, tol: ToleranceConfig, P: dict) -> None:
    prop = P["selfadjoint_connectivity"]
    count = min(_CONNECTIVITY_COUNT, max(5, trials))
    for _ in range(count):
        a = random_fredholm_diagonal(rng)
        b = random_fredholm_diagonal(rng)
        try:
            path = homotopy_path(a, b, steps=33, eps_step=0.25, tol=tol)
        except GapLabError as exc:
            prop.check(False, math.inf, (a, b))
            continue
        ok = (
            isinstance(path, HomotopyPath)
            and all(i == 0 for i in path.indices)
            and validate_path(path, 0.25, tol)
        )
        if isinstance(path, HomotopyPath):
            prop.check(ok, max(0.0, path.max_step_gap - 0.25), (a, b))
            prop.ratio("max_step_gap", path.max_step_gap, "max")
        else:
            prop.check(False, math.inf, (a, b))


def _sign_stable_diagonal(rng: np.random.Generator) -> DiagonalOp:
    """Symbol with every value >= 1: prefix in [1, 3], constant term >= 1 and
    nonnegative higher coefficients.  On such coordinates all metric streams
    are monotone, which is exactly the regime where grid refinement provably
    never increases a step gap (a coordinate swinging through zero can make
    a midpoint farther from one endpoint than the endpoints are from each
    other, so the unrestricted claim fails)."""
    npre = int(rng.integers(0, 5))
    prefix = tuple(float(x) for x in rng.uniform(1.0, 3.0, npre))
    deg = int(rng.integers(1, 3))
    coeffs = [float(rng.uniform(1.0, 2.0))]
    coeffs += [float(rng.uniform(0.0, 1.0)) for _ in range(deg - 1)]
    coeffs.append(float(rng.uniform(0.5, 2.0)))
    return DiagonalOp(symbol(prefix=prefix, tail=poly_tail(coeffs)))


def _tight_max_gap(a, b, steps: int, tol: ToleranceConfig) -> float:
    path = homotopy_path(a, b, steps=steps, eps_step=8.0, tol=tol)
    worst = 0.0
    for x, y in zip(path.samples, path.samples[1:]):
        rep = gap_sup_distance(x, y, tol, err_target=1e-6)
        worst = max(worst, rep.value + rep.certified_error)
    return worst


def _refinement_block(rng: np.random.Generator, tol: ToleranceConfig, P: dict) -> None:
    monotone = P["refinement_monotone"]
    subdivision = P["refinement_subdivision_bound"]
    for _ in range(_REFINEMENT_COUNT):
        a = _sign_stable_diagonal(rng)
        b = _sign_stable_diagonal(rng)
        coarse = _tight_max_gap(a, b, 9, tol)
        fine = _tight_max_gap(a, b, 17, tol)
        monotone.check(fine <= coarse + 1e-5, max(0.0, fine - coarse), (a, b))
    for _ in range(_REFINEMENT_COUNT):
        # unrestricted pairs: only the triangle-inequality direction holds
        a = random_fredholm_diagonal(rng)
        b = random_fredholm_diagonal(rng)
        coarse = _tight_max_gap(a, b, 9, tol)
        fine = _tight_max_gap(a, b, 17, tol)
        subdivision.check(
            coarse <= 2.0 * fine + 1e-5, max(0.0, coarse - 2.0 * fine), (a, b)
        )


def run_suite(
    seed: int,
    trials: int,
    dim_max: int,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> dict:
    """Run every invariant over seeded ensembles; returns the report dict."""
    if not isinstance(trials, int) or trials < 1:
        raise InvalidInput(f"trials must be a positive integer, got {trials!r}")
    if not isinstance(dim_max, int) or dim_max < 1:
        raise InvalidInput(f"dim_max must be a positive integer, got {dim_max!r}")
    rng_mat, rng_diag, rng_shift, rng_conn, rng_refine = spawn_rngs(seed, 5)
    P = _props(_PROPERTY_NAMES)

    for _ in range(trials):
        _matrix_trial(rng_mat, dim_max, tol, P)
    for _ in range(trials):
        _diag_trial(rng_diag, tol, P)
    _fuglede_block(tol, P)
    _shift_oracle_block(rng_shift, trials, tol, P)
    _connectivity_block(rng_conn, trials, tol, P)
    _refinement_block(rng_refine, tol, P)

    failures = sum(p.failures for p in P.values())
    details = []
    for name in _PROPERTY_NAMES:
        details.extend(P[name].details)
    return {
        "schema": 1,
        "seed": seed,
        "trials": trials,
        "dim_max": dim_max,
        "generator": "pcg64",
        "failures": failures,
        "properties": {name: P[name].to_json() for name in _PROPERTY_NAMES},
        "failure_details": details[:_MAX_DETAILS],
    }
