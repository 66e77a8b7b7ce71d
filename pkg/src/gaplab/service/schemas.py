"""Request and response bodies for the service endpoints.

Requests carry the same ``schema: 1`` discipline as operator descriptors and
may override numerical tolerances per call.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, confloat, conint

from ..config import DEFAULT_TOL, ToleranceConfig
from ..descriptors import OperatorDescriptor


class _StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


_Eps = confloat(gt=0.0, lt=1.0, allow_inf_nan=False)


class ToleranceModel(_StrictModel):
    eps_rank: Optional[_Eps] = None
    eps_residual: Optional[_Eps] = None
    eps_bounded: Optional[_Eps] = None

    def to_config(self) -> ToleranceConfig:
        return ToleranceConfig(
            eps_rank=self.eps_rank if self.eps_rank is not None else DEFAULT_TOL.eps_rank,
            eps_residual=(
                self.eps_residual
                if self.eps_residual is not None
                else DEFAULT_TOL.eps_residual
            ),
            eps_bounded=(
                self.eps_bounded
                if self.eps_bounded is not None
                else DEFAULT_TOL.eps_bounded
            ),
        )


def _config_of(tol: Optional[ToleranceModel]) -> ToleranceConfig:
    return tol.to_config() if tol is not None else DEFAULT_TOL


class MetricRequest(_StrictModel):
    schema_version: Literal[1] = Field(alias="schema")
    which: Literal["gap_proj", "gap_sup", "riesz", "tilde"]
    a: OperatorDescriptor
    b: OperatorDescriptor
    tol: Optional[ToleranceModel] = None


class MetricResponse(BaseModel):
    value: float
    certified_error: float
    method: str
    truncation_index: Optional[int] = None


class FugledeRequest(_StrictModel):
    schema_version: Literal[1] = Field(alias="schema")
    n_max: PositiveInt
    tol: Optional[ToleranceModel] = None


class FugledeResponse(BaseModel):
    rows: list[tuple[int, float, float, float]]


class DensityRequest(_StrictModel):
    schema_version: Literal[1] = Field(alias="schema")
    descriptor: OperatorDescriptor
    n_max: PositiveInt
    tol: Optional[ToleranceModel] = None


class DensityResponse(BaseModel):
    rows: list[tuple[int, float, float, float]]
    note: dict


class HomotopyRequest(_StrictModel):
    schema_version: Literal[1] = Field(alias="schema")
    a: OperatorDescriptor
    b: OperatorDescriptor
    steps: conint(ge=2) = 101
    eps_step: confloat(gt=0.0, allow_inf_nan=False) = 0.05
    tol: Optional[ToleranceModel] = None


class HomotopyConnected(BaseModel):
    connected: Literal[True] = True
    index: int
    max_step_gap: float
    lambdas: list[float]
    indices: list[int]
    step_gaps: list[float]


class HomotopyNoPath(BaseModel):
    connected: Literal[False] = False
    index_a: int
    index_b: int
    reason: str


class SuiteRequest(_StrictModel):
    schema_version: Literal[1] = Field(alias="schema")
    seed: conint(ge=0, lt=2**64) = 42
    trials: PositiveInt = 500
    dim_max: PositiveInt = 8
    tol: Optional[ToleranceModel] = None


class HealthResponse(BaseModel):
    status: Literal["ok"]
    version: str
