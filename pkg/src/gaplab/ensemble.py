"""Seeded random operator ensembles for sweeps and property checks.

All randomness flows through numpy's PCG64 generator seeded from a single
64-bit integer via SeedSequence, so a fixed seed reproduces every draw
byte-for-byte.  Matrix and symbol entries have independent real and imaginary
parts uniform on [-1, 1] unless stated otherwise.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidInput
from .operators import DiagonalOp, MatrixOp, Operator, ShiftedDiagonalOp
from .symbols import SymbolSpec, const_tail, poly_tail, symbol


def rng_from_seed(seed: int) -> np.random.Generator:
    if not isinstance(seed, int) or seed < 0 or seed >= 2**64:
        raise InvalidInput(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def spawn_rngs(seed: int, count: int) -> list[np.random.Generator]:
    """Independent child generators, one per subtask, in a fixed order."""
    if not isinstance(seed, int) or seed < 0 or seed >= 2**64:
        raise InvalidInput(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.Generator(np.random.PCG64(c)) for c in children]


def random_complex_array(rng: np.random.Generator, *shape: int) -> np.ndarray:
    re = rng.uniform(-1.0, 1.0, size=shape)
    im = rng.uniform(-1.0, 1.0, size=shape)
    return re + 1j * im


def random_matrix(rng: np.random.Generator, rows: int, cols: int) -> MatrixOp:
    return MatrixOp(random_complex_array(rng, rows, cols))


def random_matrix_pair(
    rng: np.random.Generator, dim_max: int
) -> tuple[MatrixOp, MatrixOp]:
    """Two square matrices of one random dimension in 1..dim_max."""
    d = int(rng.integers(1, dim_max + 1))
    return random_matrix(rng, d, d), random_matrix(rng, d, d)


def random_hermitian(rng: np.random.Generator, dim: int) -> MatrixOp:
    a = random_complex_array(rng, dim, dim)
    return MatrixOp((a + a.conj().T) / 2.0)


def random_hermitian_pair(
    rng: np.random.Generator, dim_max: int
) -> tuple[MatrixOp, MatrixOp]:
    d = int(rng.integers(1, dim_max + 1))
    return random_hermitian(rng, d), random_hermitian(rng, d)


def _random_prefix(rng: np.random.Generator, max_len: int, real: bool) -> list[complex]:
    n = int(rng.integers(0, max_len + 1))
    if n == 0:
        return []
    if real:
        values = [complex(3.0 * rng.uniform(-1.0, 1.0)) for _ in range(n)]
    else:
        values = list(random_complex_array(rng, n) * 2.0)
    # occasionally plant an exact zero so kernel bookkeeping gets exercised
    if n and rng.uniform() < 0.3:
        values[int(rng.integers(0, n))] = 0j
    return values


def _random_divergent_tail(rng: np.random.Generator):
    """Real polynomial tail of degree 1 or 2 with positive leading coefficient.

    Positive leads keep any two draws interpolable coefficient-wise without a
    sign change, which the path constructor needs.
    """
    degree = int(rng.integers(1, 3))
    coeffs = [float(rng.uniform(-1.0, 1.0)) for _ in range(degree)]
    coeffs.append(float(rng.uniform(0.5, 2.5)))
    return poly_tail(tuple(coeffs))


def random_fredholm_diagonal(rng: np.random.Generator, prefix_max: int = 6) -> DiagonalOp:
    """Selfadjoint Fredholm diagonal: real symbol, divergent polynomial tail."""
    return DiagonalOp(
        symbol(_random_prefix(rng, prefix_max, real=True), _random_divergent_tail(rng))
    )


def random_diagonal(rng: np.random.Generator, prefix_max: int = 6) -> DiagonalOp:
    """General diagonal draw: complex prefix, tail either a real polynomial
    or a complex constant (possibly zero)."""
    prefix = _random_prefix(rng, prefix_max, real=False)
    if rng.uniform() < 0.5:
        tail = _random_divergent_tail(rng)
    else:
        value = complex(random_complex_array(rng))
        if rng.uniform() < 0.1:
            value = 0j
        tail = const_tail(value)
    return DiagonalOp(symbol(prefix, tail))


def random_bounded_diagonal(rng: np.random.Generator, prefix_max: int = 6) -> DiagonalOp:
    prefix = list(random_complex_array(rng, int(rng.integers(0, prefix_max + 1))))
    value = complex(random_complex_array(rng))
    return DiagonalOp(symbol(prefix, const_tail(value)))


def random_shifted(rng: np.random.Generator, k_max: int = 3) -> ShiftedDiagonalOp:
    """Admissible shifted diagonal: finitely many symbol zeros and a tail
    either bounded away from zero or divergent."""
    k = int(rng.integers(1, k_max + 1))
    prefix = _random_prefix(rng, 4, real=False)
    if rng.uniform() < 0.5:
        tail = _random_divergent_tail(rng)
    else:
        phase = rng.uniform(0.0, 2.0 * np.pi)
        radius = rng.uniform(0.5, 2.0)
        value = radius * complex(np.cos(phase), np.sin(phase))
        tail = const_tail(value)
    return ShiftedDiagonalOp(k, symbol(prefix, tail))
