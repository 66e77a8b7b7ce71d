"""Locale-free numeric formatting for CSV and JSON output.

Every numeric CSV field is printed with 12 significant digits in positional
notation, so values parse back exactly to the rounded figure and diffs stay
stable across platforms.
"""

from __future__ import annotations

import math

from .errors import InvalidInput


def format_sig12(x: float) -> str:
    """Positional decimal with exactly 12 significant digits.

    0.5 -> '0.500000000000', 1.0 -> '1.00000000000', 1/sqrt(2) ->
    '0.707106781187'.  Exponents stay positional for every magnitude the
    experiments produce; extreme magnitudes fall back to scientific form.
    """
    if not isinstance(x, (int, float)):
        raise InvalidInput(f"expected a real number, got {type(x).__name__}")
    x = float(x)
    if not math.isfinite(x):
        raise InvalidInput(f"cannot format non-finite value {x!r}")
    if x == 0.0:
        return "0.00000000000"
    mantissa, exp = f"{x:.11e}".split("e")
    exp = int(exp)
    # keep positional notation while it stays readable
    if exp < -4 or exp > 15:
        return f"{x:.11e}"
    sign = "-" if mantissa.startswith("-") else ""
    digits = mantissa.lstrip("-").replace(".", "")
    if exp >= 0:
        # exp can exceed the 12 stored digits; pad the integer part with zeros
        int_part = digits[: exp + 1].ljust(exp + 1, "0")
        frac_part = digits[exp + 1 :]
        if not frac_part:
            return f"{sign}{int_part}"
        return f"{sign}{int_part}.{frac_part}"
    return f"{sign}0.{'0' * (-exp - 1)}{digits}"
