"""Eigenvalue sequences with certified tail behaviour.

A symbol assigns a complex value a_j to every basis index j = 1, 2, ...  It
stores finitely many explicit prefix values followed by an analytic tail: a
real polynomial in j, a complex constant, or a polynomial pushed through a
chain of coordinatewise transforms (a mapped tail).  Keeping tails symbolic is
what lets metric and index computations certify truncation: every routine here
can name a window beyond which the tail sits in a provably monotone regime and
report closed-form limits with explicit error bounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np
from numpy.polynomial import polynomial as npp

from .errors import InvalidInput, NumericalFailure, Unsupported

# scalar transform names usable in mapped-tail chains
_REAL_MAPS = frozenset({"bounded", "inv_bounded", "scale", "conj"})
_ALL_MAPS = _REAL_MAPS | frozenset({"cayley", "resolvent"})

# indices are capped here during stable-window searches; a polynomial whose
# modulus stays below 1 this far out cannot be certified
_SEARCH_CAP = 2**62


@dataclass(frozen=True)
class ScalarMap:
    """One coordinatewise transform.  param carries the scale factor for
    'scale' and the sign (+1.0 or -1.0) for 'resolvent'."""

    name: str
    param: float = 0.0

    def __post_init__(self) -> None:
        if self.name not in _ALL_MAPS:
            raise InvalidInput(f"unknown scalar map {self.name!r}")
        if self.name == "scale" and (not np.isfinite(self.param) or self.param == 0.0):
            raise InvalidInput("scale factor must be finite and nonzero")
        if self.name == "resolvent" and self.param not in (1.0, -1.0):
            raise InvalidInput("resolvent sign must be +1 or -1")


@dataclass(frozen=True)
class PolyTail:
    """Real polynomial tail a_j = c0 + c1*j + ... + cd*j^d.

    Trailing zero coefficients are stripped; the empty tuple is the
    identically-zero tail.
    """

    coeffs: tuple[float, ...]


@dataclass(frozen=True)
class ConstTail:
    """Constant complex tail."""

    value: complex


@dataclass(frozen=True)
class MappedTail:
    """A polynomial tail seen through a chain of scalar maps (left to right).

    Only produced internally, by applying operator transforms to symbols; the
    base is always a nonconstant polynomial (constant bases collapse to
    PolyTail/ConstTail on construction).
    """

    base: PolyTail
    chain: tuple[ScalarMap, ...]


Tail = Union[PolyTail, ConstTail, MappedTail]


def poly_tail(coeffs) -> PolyTail:
    out = []
    for c in coeffs:
        if isinstance(c, complex) and c.imag != 0.0:
            raise InvalidInput("polynomial tail coefficients must be real")
        c = float(c.real if isinstance(c, complex) else c)
        if not np.isfinite(c):
            raise InvalidInput("polynomial tail coefficients must be finite")
        out.append(c)
    while out and out[-1] == 0.0:
        out.pop()
    return PolyTail(tuple(out))


def const_tail(value) -> ConstTail:
    v = complex(value)
    if not (np.isfinite(v.real) and np.isfinite(v.imag)):
        raise InvalidInput("constant tail value must be finite")
    return ConstTail(v)


@dataclass(frozen=True)
class SymbolSpec:
    """Finite prefix of explicit values followed by a tail."""

    prefix: tuple[complex, ...] = ()
    tail: Tail = field(default_factory=lambda: PolyTail(()))


def symbol(prefix=(), tail: Tail | None = None) -> SymbolSpec:
    vals = []
    for a in prefix:
        a = complex(a)
        if not (np.isfinite(a.real) and np.isfinite(a.imag)):
            raise InvalidInput("symbol prefix values must be finite")
        vals.append(a)
    if tail is None:
        tail = PolyTail(())
    if not isinstance(tail, (PolyTail, ConstTail, MappedTail)):
        raise InvalidInput(f"unknown tail type {type(tail).__name__}")
    return SymbolSpec(tuple(vals), tail)


# ---------------------------------------------------------------------------
# evaluation

def apply_scalar_map(m: ScalarMap, z):
    """Apply one scalar map to a complex value or ndarray."""
    if m.name == "bounded":
        return z / np.sqrt(1.0 + np.abs(z) ** 2)
    if m.name == "inv_bounded":
        return z / np.sqrt(1.0 - np.abs(z) ** 2)
    if m.name == "scale":
        return m.param * z
    if m.name == "conj":
        return np.conjugate(z)
    if m.name == "cayley":
        return (z - 1j) / (z + 1j)
    if m.name == "resolvent":
        return 1.0 / (z + m.param * 1j)
    raise Unsupported(f"scalar map {m.name!r} has no evaluation rule")


def _chain_values(chain: tuple[ScalarMap, ...], z):
    for m in chain:
        z = apply_scalar_map(m, z)
    return z


def tail_values(tail: Tail, idx: np.ndarray) -> np.ndarray:
    """Evaluate a tail at the (1-based) indices in idx."""
    idx = np.asarray(idx, dtype=np.float64)
    if isinstance(tail, PolyTail):
        if not tail.coeffs:
            return np.zeros(idx.shape, dtype=np.complex128)
        return npp.polyval(idx, np.asarray(tail.coeffs)).astype(np.complex128)
    if isinstance(tail, ConstTail):
        return np.full(idx.shape, tail.value, dtype=np.complex128)
    base = npp.polyval(idx, np.asarray(tail.base.coeffs)).astype(np.complex128)
    return np.asarray(_chain_values(tail.chain, base), dtype=np.complex128)


def symbol_values(sym: SymbolSpec, upto: int) -> np.ndarray:
    """Values a_1 ... a_upto as a complex array."""
    if upto < 0:
        raise InvalidInput("upto must be nonnegative")
    p = len(sym.prefix)
    head = np.asarray(sym.prefix[:upto], dtype=np.complex128)
    if upto <= p:
        return head
    rest = tail_values(sym.tail, np.arange(p + 1, upto + 1))
    return np.concatenate([head, rest])


def symbol_value(sym: SymbolSpec, j: int) -> complex:
    if j < 1:
        raise InvalidInput("symbol indices start at 1")
    if j <= len(sym.prefix):
        return sym.prefix[j - 1]
    return complex(tail_values(sym.tail, np.asarray([j]))[0])


# ---------------------------------------------------------------------------
# transforms on symbols

def _simplify_chain(chain: tuple[ScalarMap, ...]) -> tuple[ScalarMap, ...]:
    out: list[ScalarMap] = []
    for m in chain:
        if m.name == "conj" and out and out[-1].name == "conj":
            out.pop()
            continue
        if m.name == "scale" and out and out[-1].name == "scale":
            combined = out.pop().param * m.param
            if combined != 1.0:
                out.append(ScalarMap("scale", combined))
            continue
        if m.name == "scale" and m.param == 1.0:
            continue
        if m.name == "inv_bounded" and out and out[-1].name == "bounded":
            out.pop()
            continue
        if m.name == "bounded" and out and out[-1].name == "inv_bounded":
            out.pop()
            continue
        out.append(m)
    return tuple(out)


def chain_is_real(chain: tuple[ScalarMap, ...]) -> bool:
    return all(m.name in _REAL_MAPS for m in chain)


def apply_map_to_tail(tail: Tail, m: ScalarMap) -> Tail:
    if isinstance(tail, ConstTail):
        return const_tail(apply_scalar_map(m, tail.value))
    if isinstance(tail, PolyTail) and len(tail.coeffs) <= 1:
        # constant base: evaluate directly, keeping real results in the
        # polynomial family so homotopies can interpolate them
        v = apply_scalar_map(m, complex(tail.coeffs[0]) if tail.coeffs else 0.0 + 0.0j)
        v = complex(v)
        if v.imag == 0.0:
            return poly_tail((v.real,))
        return const_tail(v)
    if isinstance(tail, PolyTail):
        base, chain = tail, (m,)
    else:
        if m.name == "conj" and chain_is_real(tail.chain):
            return tail  # values are real, conjugation is the identity
        base, chain = tail.base, tail.chain + (m,)
    chain = _simplify_chain(chain)
    if not chain:
        return base
    return MappedTail(base, chain)


def apply_map_to_symbol(sym: SymbolSpec, m: ScalarMap) -> SymbolSpec:
    prefix = tuple(complex(apply_scalar_map(m, a)) for a in sym.prefix)
    for a in prefix:
        if not (np.isfinite(a.real) and np.isfinite(a.imag)):
            raise InvalidInput(f"scalar map {m.name!r} produced a non-finite prefix value")
    return SymbolSpec(prefix, apply_map_to_tail(sym.tail, m))


def is_real_symbol(sym: SymbolSpec, eps: float) -> bool:
    """True when every value is real within eps (tail exactly real)."""
    if any(abs(a.imag) > eps for a in sym.prefix):
        return False
    t = sym.tail
    if isinstance(t, PolyTail):
        return True
    if isinstance(t, ConstTail):
        return abs(t.value.imag) <= eps
    return chain_is_real(t.chain)


def conjugate_symbol(sym: SymbolSpec) -> SymbolSpec:
    return apply_map_to_symbol(sym, ScalarMap("conj"))


# ---------------------------------------------------------------------------
# tail analysis

def _poly_eval(coeffs: tuple[float, ...], x: float) -> float:
    return float(npp.polyval(x, np.asarray(coeffs))) if coeffs else 0.0


def _cauchy_root_bound(coeffs: tuple[float, ...]) -> float:
    """Upper bound on |roots| of a nonconstant real polynomial."""
    lead = coeffs[-1]
    rest = max(abs(c) for c in coeffs[:-1]) if len(coeffs) > 1 else 0.0
    return 1.0 + rest / abs(lead)


def _map_limit(m: ScalarMap, x: float) -> complex | float:
    """Image of an extended-real limit under one scalar map."""
    if m.name == "bounded":
        if np.isinf(x):
            return 1.0 if x > 0 else -1.0
        return x / np.sqrt(1.0 + x * x)
    if m.name == "inv_bounded":
        if np.isinf(x):
            raise NumericalFailure("inverse bounded transform of an unbounded limit")
        if abs(x) >= 1.0:
            return np.inf if x > 0 else -np.inf
        return x / np.sqrt(1.0 - x * x)
    if m.name == "scale":
        return m.param * x
    if m.name == "conj":
        return x
    if m.name == "cayley":
        if np.isinf(x):
            return 1.0 + 0.0j
        return complex((x - 1j) / (x + 1j))
    if m.name == "resolvent":
        if np.isinf(x):
            return 0.0 + 0.0j
        return complex(1.0 / (x + m.param * 1j))
    raise Unsupported(f"scalar map {m.name!r} has no limit rule")


def _chain_limit(chain: tuple[ScalarMap, ...], x: float):
    """Push an extended-real base limit through a chain.  Returns a float
    (possibly infinite) while values stay real, complex afterwards."""
    val: complex | float = x
    for m in chain:
        if isinstance(val, complex):
            if m.name == "conj":
                val = val.conjugate()
                continue
            raise Unsupported(
                f"cannot follow scalar map {m.name!r} after a complex-valued map"
            )
        val = _map_limit(m, val)
    return val


def _poly_sign_at_infinity(coeffs: tuple[float, ...]) -> int:
    return 1 if coeffs[-1] > 0 else -1


def stable_index(tail: Tail) -> int:
    """Smallest window end J such that beyond J the tail is monotone, keeps a
    fixed sign matching its limit, and (when divergent) has modulus >= 1."""
    if isinstance(tail, ConstTail):
        return 0
    base = tail if isinstance(tail, PolyTail) else tail.base
    if len(base.coeffs) <= 1:
        return 0
    coeffs = base.coeffs
    deriv = tuple(i * c for i, c in enumerate(coeffs))[1:]
    bound = _cauchy_root_bound(coeffs)
    if len(deriv) > 1:
        bound = max(bound, _cauchy_root_bound(deriv))
    j0 = max(0, int(np.ceil(bound)))
    sigma = _poly_sign_at_infinity(coeffs)

    if isinstance(tail, PolyTail):
        chain: tuple[ScalarMap, ...] = ()
        limit = _chain_limit((), np.inf if sigma > 0 else -np.inf)
    else:
        chain = tail.chain
        limit = _chain_limit(chain, np.inf if sigma > 0 else -np.inf)
    if isinstance(limit, complex) or not np.isinf(limit):
        return j0  # finite or complex limit: only monotonicity is needed

    target_sign = 1 if limit > 0 else -1

    def ok(j: int) -> bool:
        v = _chain_values(chain, complex(_poly_eval(coeffs, float(j + 1))))
        v = complex(v)
        if v.imag != 0.0:
            return False
        return (1 if v.real > 0 else -1) == target_sign and abs(v.real) >= 1.0

    if ok(j0):
        return j0
    hi = j0 + 1
    while not ok(hi):
        hi *= 2
        if hi > _SEARCH_CAP:
            raise NumericalFailure(
                "tail modulus grows too slowly to certify a stable window"
            )
    lo = j0  # ok(lo) is False, ok(hi) is True
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _tail_regime(tail: Tail, start: int):
    """Describe the tail beyond a window end start >= stable_index(tail).

    Returns one of
      ("zero",)                     identically zero
      ("const", v)                  exactly the constant v
      ("real", v1, limit)           real values, monotone from v1 toward limit
      ("cmplx", v1, limit)          complex values with monotone modulus
    where v1 is the exact value at index start + 1.
    """
    if isinstance(tail, ConstTail):
        return ("const", tail.value)
    base = tail if isinstance(tail, PolyTail) else tail.base
    if not base.coeffs:
        return ("zero",)
    if len(base.coeffs) == 1:
        return ("const", complex(base.coeffs[0]))
    sigma = _poly_sign_at_infinity(base.coeffs)
    base_limit = np.inf if sigma > 0 else -np.inf
    v1_base = _poly_eval(base.coeffs, float(start + 1))
    if isinstance(tail, PolyTail):
        return ("real", v1_base, base_limit)
    limit = _chain_limit(tail.chain, base_limit)
    v1 = complex(_chain_values(tail.chain, complex(v1_base)))
    if chain_is_real(tail.chain):
        return ("real", v1.real, limit)
    return ("cmplx", v1, limit)


def tails_identical(a: Tail, b: Tail) -> bool:
    return a == b


def pair_window(sym_a: SymbolSpec, sym_b: SymbolSpec) -> int:
    """Window end J so that beyond J both tails are in their stable regime.
    Identical tails need no stable regime: beyond both prefixes they agree
    exactly and every pairwise distance vanishes."""
    j = max(len(sym_a.prefix), len(sym_b.prefix))
    if tails_identical(sym_a.tail, sym_b.tail):
        return j
    return max(j, stable_index(sym_a.tail), stable_index(sym_b.tail))


# ---------------------------------------------------------------------------
# derived per-coordinate streams used by the metrics

def metric_stream(term: str, values: np.ndarray) -> np.ndarray:
    """Per-coordinate scalar streams: R = resolvent of the square, G = graph
    off-diagonal, F = bounded transform, RES = resolvent at -i, CAY = Cayley."""
    a = np.asarray(values, dtype=np.complex128)
    m2 = np.abs(a) ** 2
    if term == "R":
        return (1.0 / (1.0 + m2)).astype(np.complex128)
    if term == "G":
        return a / (1.0 + m2)
    if term == "F":
        return a / np.sqrt(1.0 + m2)
    if term == "RES":
        return 1.0 / (a + 1j)
    if term == "CAY":
        return (a - 1j) / (a + 1j)
    raise InvalidInput(f"unknown metric stream {term!r}")


def _scalar_stream(term: str, v: complex) -> complex:
    return complex(metric_stream(term, np.asarray([v]))[0])


def derived_tail_profile(term: str, tail: Tail, start: int) -> tuple[complex, float]:
    """(limit, err) with |stream(a_j) - limit| <= err for every j > start.

    Requires start >= stable_index(tail).  The streams R, G, F and RES are
    1-Lipschitz on the real line, which covers the finite-limit cases; the
    divergent cases use the monotone bounds
        R <= 1/(1+m^2),  |G| <= m/(1+m^2),  |F - sign| <= 1/(2 m^2),
        |RES| <= 1/sqrt(1+m^2)
    valid for modulus >= m >= 1.
    """
    regime = _tail_regime(tail, start)
    if regime[0] == "zero":
        return _scalar_stream(term, 0.0 + 0.0j), 0.0
    if regime[0] == "const":
        return _scalar_stream(term, regime[1]), 0.0
    if regime[0] == "cmplx":
        raise Unsupported(
            "metric streams are certified only for real or constant tails"
        )
    _, v1, limit = regime
    if not np.isinf(limit):
        return _scalar_stream(term, complex(limit)), abs(v1 - limit)
    m = abs(v1)
    if m < 1.0:
        raise NumericalFailure(
            "window does not reach the certified regime (tail modulus < 1)"
        )
    sigma = 1.0 if limit > 0 else -1.0
    if term == "R":
        return 0.0 + 0.0j, 1.0 / (1.0 + m * m)
    if term == "G":
        return 0.0 + 0.0j, m / (1.0 + m * m)
    if term == "F":
        return complex(sigma), 1.0 / (2.0 * m * m)
    if term == "RES":
        return 0.0 + 0.0j, 1.0 / np.sqrt(1.0 + m * m)
    if term == "CAY":
        # divergent tails route the Cayley stream through RES (c = 1 - 2i RES)
        raise Unsupported("CAY profiles on divergent tails go through RES")
    raise InvalidInput(f"unknown metric stream {term!r}")


# ---------------------------------------------------------------------------
# norms and zero structure

def symbol_sup_abs(sym: SymbolSpec) -> float:
    """sup_j |a_j| as an extended real; exact for every supported tail."""
    j = max(len(sym.prefix), stable_index(sym.tail))
    window = symbol_values(sym, j)
    win = float(np.max(np.abs(window))) if j else 0.0
    regime = _tail_regime(sym.tail, j)
    if regime[0] == "zero":
        return win
    if regime[0] == "const":
        return max(win, abs(regime[1]))
    _, v1, limit = regime
    if isinstance(limit, complex) or not np.isinf(limit):
        # modulus is monotone along the tail, so the sup is attained at the
        # first tail value or in the limit
        return max(win, abs(v1), abs(limit))
    return np.inf


@dataclass(frozen=True)
class SymbolZeroReport:
    """Zero structure of a symbol relative to a rank threshold eps."""

    window: int
    zero_count: int              # coordinates with |a_j| <= eps, j <= window
    tail_eventually_zero: bool   # tail is (numerically) the zero sequence
    tail_bounded_away: bool      # inf of |a_j| beyond the window exceeds eps
    min_nonzero_abs: float       # smallest |a_j| above eps anywhere (inf if none)


def symbol_zero_report(sym: SymbolSpec, eps: float) -> SymbolZeroReport:
    j = max(len(sym.prefix), stable_index(sym.tail))
    window = np.abs(symbol_values(sym, j))
    zero_count = int(np.count_nonzero(window <= eps)) if j else 0
    nonzero = window[window > eps] if j else np.asarray([])
    min_nonzero = float(np.min(nonzero)) if nonzero.size else np.inf

    regime = _tail_regime(sym.tail, j)
    if regime[0] == "zero":
        return SymbolZeroReport(j, zero_count, True, False, min_nonzero)
    if regime[0] == "const":
        mod = abs(regime[1])
        if mod <= eps:
            return SymbolZeroReport(j, zero_count, True, False, min_nonzero)
        return SymbolZeroReport(j, zero_count, False, True, min(min_nonzero, mod))
    _, v1, limit = regime
    lim_mod = np.inf if (not isinstance(limit, complex) and np.isinf(limit)) else abs(limit)
    tail_inf = min(abs(v1), lim_mod)
    return SymbolZeroReport(
        j, zero_count, False, bool(tail_inf > eps), min(min_nonzero, max(tail_inf, 0.0))
    )
