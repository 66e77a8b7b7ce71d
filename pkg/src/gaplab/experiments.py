"""The two sweep experiments behind the CSV commands.

fuglede_rows traces the family where the gap metrics collapse while the Riesz
metric stays bounded away from zero; density_rows traces bounded approximants
converging to a possibly unbounded operator in the gap metric.
"""

from __future__ import annotations

from .config import DEFAULT_TOL, ToleranceConfig
from .errors import InvalidInput
from .metrics import gap_sup_distance, riesz_distance, tilde_distance
from .operators import (
    Operator,
    bounded_transform,
    density_approximant,
    fuglede_operator,
    is_bounded,
    operator_norm_of,
)

FUGLEDE_HEADER = ("n", "d_tilde", "gap_sup", "riesz")
DENSITY_HEADER = ("n", "riesz_to_t", "gap_to_t", "norm_F_Tn")


def fuglede_rows(
    n_max: int, tol: ToleranceConfig = DEFAULT_TOL
) -> list[tuple[int, float, float, float]]:
    """Rows (n, d_tilde, gap_sup, riesz) against the unflipped operator."""
    if not isinstance(n_max, int) or n_max < 1:
        raise InvalidInput(f"n_max must be a positive integer, got {n_max!r}")
    base = fuglede_operator(0)
    rows = []
    for n in range(1, n_max + 1):
        t = fuglede_operator(n)
        rows.append(
            (
                n,
                tilde_distance(t, base, tol).value,
                gap_sup_distance(t, base, tol).value,
                riesz_distance(t, base, tol).value,
            )
        )
    return rows


def density_rows(
    t: Operator, n_max: int, tol: ToleranceConfig = DEFAULT_TOL
) -> tuple[list[tuple[int, float, float, float]], dict]:
    """Rows (n, riesz_to_t, gap_to_t, norm_F_Tn) plus a summary note.

    The note records whether the input is unbounded while every approximant
    is bounded: exactly then the rows exhibit a gap-convergent sequence of
    bounded operators with no bounded limit.
    """
    if not isinstance(n_max, int) or n_max < 1:
        raise InvalidInput(f"n_max must be a positive integer, got {n_max!r}")
    rows = []
    all_bounded = True
    for n in range(1, n_max + 1):
        tn = density_approximant(t, n, tol)
        bounded = is_bounded(tn, tol)
        all_bounded = all_bounded and bounded
        rows.append(
            (
                n,
                riesz_distance(tn, t, tol).value,
                gap_sup_distance(tn, t, tol).value,
                operator_norm_of(bounded_transform(tn, tol).op),
            )
        )
    note = {
        "schema": 1,
        "input_unbounded": not is_bounded(t, tol),
        "all_approximants_bounded": all_bounded,
    }
    return rows, note
