"""Dense complex linear algebra primitives.

Matrices are plain numpy arrays of dtype complex128, validated and frozen on
entry.  Everything downstream (transforms, metrics, index theory) funnels its
dense work through the four routines here, so numerical policy (tolerances,
rejection of non-Hermitian input, deterministic SVD) lives in one place.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .config import DEFAULT_TOL, ToleranceConfig
from .errors import InvalidInput, NumericalFailure


def as_complex_matrix(entries) -> np.ndarray:
    """Coerce to an immutable 2-d complex128 array with finite entries.

    Scalars become 1x1 matrices and 1-d sequences become single rows.
    """
    try:
        mat = np.atleast_2d(np.asarray(entries, dtype=np.complex128))
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"cannot interpret input as a complex matrix: {exc}") from exc
    if mat.ndim != 2:
        raise InvalidInput(f"expected a matrix, got an array of ndim {mat.ndim}")
    if mat.shape[0] == 0 or mat.shape[1] == 0:
        raise InvalidInput("matrix dimensions must be positive")
    if not np.all(np.isfinite(mat.real)) or not np.all(np.isfinite(mat.imag)):
        raise InvalidInput("matrix entries must be finite")
    mat = mat.copy()
    mat.flags.writeable = False
    return mat


def operator_norm(mat) -> float:
    """Largest singular value."""
    mat = as_complex_matrix(mat)
    try:
        s = np.linalg.svd(mat, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc
    return float(s[0])


def svd_factor(mat) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Economy SVD: returns (U, s, V) with mat = U @ diag(s) @ V*.

    Singular values come back sorted in descending order; LAPACK makes the
    factorization deterministic for identical input bytes.
    """
    mat = as_complex_matrix(mat)
    try:
        u, s, vh = np.linalg.svd(mat, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc
    return u, s, vh.conj().T


def numerical_rank(mat, eps: float = DEFAULT_TOL.eps_rank) -> int:
    """Number of singular values above eps * max(1, s_max)."""
    if not 0.0 < eps < 1.0:
        raise InvalidInput(f"eps must lie in (0, 1), got {eps!r}")
    mat = as_complex_matrix(mat)
    try:
        s = np.linalg.svd(mat, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc
    return int(np.count_nonzero(s > eps * max(1.0, float(s[0]))))


def hermitian_apply(
    mat,
    fn: Callable[[float], complex],
    tol: ToleranceConfig = DEFAULT_TOL,
) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix through its eigendecomposition.

    The input must be Hermitian within tol.eps_residual relative to its scale;
    inputs failing the check are rejected, never symmetrized.  fn receives real
    eigenvalues one at a time and may return complex values.
    """
    mat = as_complex_matrix(mat)
    if mat.shape[0] != mat.shape[1]:
        raise InvalidInput(f"hermitian_apply requires a square matrix, got shape {mat.shape}")
    defect = operator_norm(mat - mat.conj().T)
    scale = 1.0 + operator_norm(mat)
    if defect > tol.eps_residual * scale:
        raise InvalidInput(
            f"matrix is not Hermitian: |M - M*| = {defect:.3e} exceeds "
            f"{tol.eps_residual:.1e} * (1 + |M|)"
        )
    try:
        w, q = np.linalg.eigh(mat)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigendecomposition failed: {exc}") from exc
    fw = np.asarray([fn(float(x)) for x in w], dtype=np.complex128)
    if not np.all(np.isfinite(fw.real)) or not np.all(np.isfinite(fw.imag)):
        raise NumericalFailure("scalar function produced non-finite values on the spectrum")
    return (q * fw) @ q.conj().T
