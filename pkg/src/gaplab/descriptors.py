"""JSON descriptors for operators: the wire format of the CLI and service.

Documents are versioned with a top-level ``schema: 1`` field, complex scalars
travel as ``[re, im]`` pairs, and unknown fields are rejected so that typos
fail loudly with a location-precise message.
"""

from __future__ import annotations

from typing import Annotated, Literal, Union

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    FiniteFloat,
    NonNegativeInt,
    PositiveInt,
    TypeAdapter,
    ValidationError,
    field_validator,
)

from .errors import InvalidInput, Unsupported
from .operators import (
    DiagonalOp,
    MatrixOp,
    Operator,
    ShiftedDiagonalOp,
    TensorExtendedOp,
)
from .symbols import ConstTail, PolyTail, SymbolSpec, const_tail, poly_tail, symbol

Pair = tuple[FiniteFloat, FiniteFloat]


class _StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True, frozen=True)


class PolyTailModel(_StrictModel):
    type: Literal["poly"]
    coeffs: list[FiniteFloat]


class ConstTailModel(_StrictModel):
    type: Literal["const"]
    value: Pair


TailModel = Annotated[Union[PolyTailModel, ConstTailModel], Field(discriminator="type")]


class SymbolModel(_StrictModel):
    prefix: list[Pair] = Field(default_factory=list)
    tail: TailModel


def _check_rectangular(v):
    if not v or not v[0]:
        raise ValueError("matrix entries must form a nonempty rectangle")
    width = len(v[0])
    for i, row in enumerate(v):
        if len(row) != width:
            raise ValueError(f"row {i} has {len(row)} entries, expected {width}")
    return v


class MatrixDescriptor(_StrictModel):
    schema_version: Literal[1] = Field(alias="schema")
    kind: Literal["matrix"]
    entries: list[list[Pair]]

    _rectangular = field_validator("entries")(_check_rectangular)


class DiagonalDescriptor(_StrictModel):
    schema_version: Literal[1] = Field(alias="schema")
    kind: Literal["diagonal"]
    symbol: SymbolModel


class ShiftedDiagonalDescriptor(_StrictModel):
    schema_version: Literal[1] = Field(alias="schema")
    kind: Literal["shifted_diagonal"]
    k: NonNegativeInt
    symbol: SymbolModel


class TensorDescriptor(_StrictModel):
    schema_version: Literal[1] = Field(alias="schema")
    kind: Literal["tensor"]
    entries: list[list[Pair]]
    multiplicity: PositiveInt

    _rectangular = field_validator("entries")(_check_rectangular)


OperatorDescriptor = Annotated[
    Union[
        MatrixDescriptor,
        DiagonalDescriptor,
        ShiftedDiagonalDescriptor,
        TensorDescriptor,
    ],
    Field(discriminator="kind"),
]

_DESCRIPTOR_ADAPTER: TypeAdapter = TypeAdapter(OperatorDescriptor)


def parse_descriptor(data) -> OperatorDescriptor:
    """Validate a mapping (or JSON text) into a descriptor model."""
    try:
        if isinstance(data, (str, bytes)):
            return _DESCRIPTOR_ADAPTER.validate_json(data)
        return _DESCRIPTOR_ADAPTER.validate_python(data)
    except ValidationError as exc:
        raise InvalidInput(str(exc)) from exc


def _entries_to_array(entries) -> np.ndarray:
    return np.asarray(
        [[complex(re, im) for re, im in row] for row in entries],
        dtype=np.complex128,
    )


def _symbol_from_model(model: SymbolModel) -> SymbolSpec:
    prefix = [complex(re, im) for re, im in model.prefix]
    if isinstance(model.tail, PolyTailModel):
        tail = poly_tail(tuple(float(c) for c in model.tail.coeffs))
    else:
        re, im = model.tail.value
        tail = const_tail(complex(re, im))
    return symbol(prefix, tail)


def to_operator(desc: OperatorDescriptor) -> Operator:
    if isinstance(desc, MatrixDescriptor):
        return MatrixOp(_entries_to_array(desc.entries))
    if isinstance(desc, DiagonalDescriptor):
        return DiagonalOp(_symbol_from_model(desc.symbol))
    if isinstance(desc, ShiftedDiagonalDescriptor):
        return ShiftedDiagonalOp(desc.k, _symbol_from_model(desc.symbol))
    if isinstance(desc, TensorDescriptor):
        return TensorExtendedOp(
            MatrixOp(_entries_to_array(desc.entries)), desc.multiplicity
        )
    raise InvalidInput(f"unknown descriptor {type(desc).__name__}")


def _pairs(values) -> list[tuple[float, float]]:
    return [(float(v.real), float(v.imag)) for v in values]


def _symbol_to_model(sym: SymbolSpec) -> SymbolModel:
    if isinstance(sym.tail, PolyTail):
        tail = PolyTailModel(type="poly", coeffs=list(sym.tail.coeffs))
    elif isinstance(sym.tail, ConstTail):
        v = sym.tail.value
        tail = ConstTailModel(type="const", value=(float(v.real), float(v.imag)))
    else:
        raise Unsupported(
            "only polynomial and constant tails have a descriptor form"
        )
    return SymbolModel(prefix=_pairs(sym.prefix), tail=tail)


def to_descriptor(t: Operator) -> OperatorDescriptor:
    """Descriptor form of an operator, used to embed counterexamples."""
    if isinstance(t, MatrixOp):
        return MatrixDescriptor(
            schema_version=1,
            kind="matrix",
            entries=[_pairs(row) for row in t.matrix],
        )
    if isinstance(t, DiagonalOp):
        return DiagonalDescriptor(
            schema_version=1, kind="diagonal", symbol=_symbol_to_model(t.symbol)
        )
    if isinstance(t, ShiftedDiagonalOp):
        return ShiftedDiagonalDescriptor(
            schema_version=1,
            kind="shifted_diagonal",
            k=t.k,
            symbol=_symbol_to_model(t.symbol),
        )
    if isinstance(t, TensorExtendedOp):
        return TensorDescriptor(
            schema_version=1,
            kind="tensor",
            entries=[_pairs(row) for row in t.inner.matrix],
            multiplicity=t.multiplicity,
        )
    raise Unsupported(f"{type(t).__name__} has no descriptor form")


def descriptor_dict(desc: OperatorDescriptor) -> dict:
    return desc.model_dump(by_alias=True, mode="json")
