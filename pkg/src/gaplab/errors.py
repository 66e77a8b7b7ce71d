"""Exception types shared across the package."""


class GapLabError(Exception):
    """Base class for every error raised deliberately by this package."""


class InvalidInput(GapLabError):
    """An input violates a documented precondition (non-finite entries, bad shapes, ...)."""


class ShapeMismatch(GapLabError):
    """Operands act between spaces of incompatible dimensions."""


class NotSelfadjoint(GapLabError):
    """The operation is only defined for selfadjoint operators."""


class NotBounded(GapLabError):
    """The operation is only defined for bounded operators."""


class NotInvertibleDefect(GapLabError):
    """1 - F*F is numerically singular, so no finite preimage under the bounded
    transform exists."""


class Unsupported(GapLabError):
    """The requested combination of representations has no certified algorithm."""


class NumericalFailure(GapLabError):
    """A numerical routine failed to converge or a runtime self-check tripped."""
