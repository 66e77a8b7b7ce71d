"""gaplab: a numerical laboratory for metrics on spaces of operators.

The package measures distances between concrete operator representations
(dense matrices, diagonal and shifted diagonal symbols, tensor extensions)
in the gap, Riesz and resolvent metrics, certifies every truncation it
performs, and classifies Fredholm operators up to gap-continuous homotopy.
"""

from .config import DEFAULT_TOL, ToleranceConfig
from .descriptors import descriptor_dict, parse_descriptor, to_descriptor, to_operator
from .errors import (
    GapLabError,
    InvalidInput,
    NotBounded,
    NotInvertibleDefect,
    NotSelfadjoint,
    NumericalFailure,
    ShapeMismatch,
    Unsupported,
)
from .fredholm import (
    INFINITE_DIM,
    HomotopyPath,
    IndexReport,
    NoPath,
    fredholm_index,
    homotopy_path,
    kernel_dims,
    validate_path,
)
from .linalg import (
    as_complex_matrix,
    hermitian_apply,
    numerical_rank,
    operator_norm,
    svd_factor,
)
from .metrics import (
    EquivalenceConstants,
    MetricReport,
    complement_residual,
    equivalence_constants,
    gap_projection_distance,
    gap_sup_distance,
    graph_projection,
    riesz_distance,
    tilde_distance,
)
from .operators import (
    BoundedTransform,
    DiagonalOp,
    MatrixOp,
    Operator,
    ShiftedDiagonalOp,
    TensorExtendedOp,
    adjoint,
    bounded_transform,
    cayley_transform,
    dense,
    density_approximant,
    fuglede_operator,
    from_bounded_transform,
    is_bounded,
    is_selfadjoint,
    odd_lift,
    operator_norm_of,
    resolvent_operator,
    tensor_extend,
    truncated_dense,
)
from .experiments import density_rows, fuglede_rows
from .formatting import format_sig12
from .suite import run_suite
from .symbols import ConstTail, PolyTail, SymbolSpec, const_tail, poly_tail, symbol

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOL",
    "ToleranceConfig",
    "GapLabError",
    "InvalidInput",
    "NotBounded",
    "NotInvertibleDefect",
    "NotSelfadjoint",
    "NumericalFailure",
    "ShapeMismatch",
    "Unsupported",
    "INFINITE_DIM",
    "HomotopyPath",
    "IndexReport",
    "NoPath",
    "fredholm_index",
    "homotopy_path",
    "kernel_dims",
    "validate_path",
    "as_complex_matrix",
    "hermitian_apply",
    "numerical_rank",
    "operator_norm",
    "svd_factor",
    "EquivalenceConstants",
    "MetricReport",
    "complement_residual",
    "equivalence_constants",
    "gap_projection_distance",
    "gap_sup_distance",
    "graph_projection",
    "riesz_distance",
    "tilde_distance",
    "BoundedTransform",
    "DiagonalOp",
    "MatrixOp",
    "Operator",
    "ShiftedDiagonalOp",
    "TensorExtendedOp",
    "adjoint",
    "bounded_transform",
    "cayley_transform",
    "dense",
    "density_approximant",
    "fuglede_operator",
    "from_bounded_transform",
    "is_bounded",
    "is_selfadjoint",
    "odd_lift",
    "operator_norm_of",
    "resolvent_operator",
    "tensor_extend",
    "truncated_dense",
    "ConstTail",
    "PolyTail",
    "SymbolSpec",
    "const_tail",
    "poly_tail",
    "symbol",
    "parse_descriptor",
    "to_operator",
    "to_descriptor",
    "descriptor_dict",
    "fuglede_rows",
    "density_rows",
    "format_sig12",
    "run_suite",
    "__version__",
]
