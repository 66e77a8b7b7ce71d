"""Numerical tolerance knobs used throughout the package."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidInput


@dataclass(frozen=True)
class ToleranceConfig:
    """Bundle of tolerances. All three must lie strictly inside (0, 1).

    eps_rank      threshold below which singular values / symbol entries count as zero
    eps_residual  allowed residual in algebraic identities (hermiticity, round trips)
    eps_bounded   margin for strict norm inequalities such as |F| < 1
    """

    eps_rank: float = 1e-10
    eps_residual: float = 1e-10
    eps_bounded: float = 1e-12

    def __post_init__(self) -> None:
        for name in ("eps_rank", "eps_residual", "eps_bounded"):
            value = getattr(self, name)
            if not isinstance(value, float) or not 0.0 < value < 1.0:
                raise InvalidInput(f"{name} must be a float in (0, 1), got {value!r}")


DEFAULT_TOL = ToleranceConfig()
