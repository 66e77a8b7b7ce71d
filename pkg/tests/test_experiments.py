"""Experiment sweeps: the flipped-coordinate family and density approximants."""

import math

import pytest

from gaplab import InvalidInput, density_rows, fuglede_operator, fuglede_rows
from gaplab.experiments import DENSITY_HEADER, FUGLEDE_HEADER


def test_headers():
    assert FUGLEDE_HEADER == ("n", "d_tilde", "gap_sup", "riesz")
    assert DENSITY_HEADER == ("n", "riesz_to_t", "gap_to_t", "norm_F_Tn")


def test_fuglede_rows_closed_forms():
    rows = fuglede_rows(60)
    assert [r[0] for r in rows] == list(range(1, 61))
    for n, tilde, gap, riesz in rows:
        assert abs(tilde - 2.0 * n / (1.0 + n * n)) <= 1e-12
        assert abs(gap - 2.0 * n / (1.0 + n * n)) <= 1e-12
        assert abs(riesz - 2.0 * n / math.sqrt(1.0 + n * n)) <= 1e-12
    # gap vanishes while the Riesz distance saturates at 2
    assert rows[-1][1] < rows[0][1]
    assert rows[-1][3] > 1.99


def test_fuglede_rows_validation():
    with pytest.raises(InvalidInput):
        fuglede_rows(0)


def test_density_rows_exact_riesz_and_norm():
    t = fuglede_operator(0)
    rows, note = density_rows(t, 40)
    for n, riesz, gap, norm_f in rows:
        assert abs(riesz - 1.0 / (n + 1.0)) <= 1e-12
        assert abs(norm_f - n / (n + 1.0)) <= 1e-12
        assert norm_f < 1.0
        expect_gap = max(
            (2.0 * n + 1.0) / (n + 1.0) ** 2,
            n * math.sqrt(2.0 * n + 1.0) / (n + 1.0) ** 2,
        )
        assert abs(gap - expect_gap) <= 1e-10
    gaps = [r[2] for r in rows]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert note["input_unbounded"] is True
    assert note["all_approximants_bounded"] is True
    assert note["schema"] == 1


def test_density_rows_bounded_input():
    from gaplab import DiagonalOp, const_tail, symbol

    t = DiagonalOp(symbol(tail=const_tail(1.0)))
    rows, note = density_rows(t, 5)
    assert note["input_unbounded"] is False
    assert len(rows) == 5
