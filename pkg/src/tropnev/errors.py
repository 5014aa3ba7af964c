"""Exception types.

Two families: ``ValidationError`` for malformed input (CLI exit code 1) and
``ComputationError`` for inputs that are well-formed but cannot be evaluated
(CLI exit code 2).
"""


class TropError(Exception):
    """Base class for every error raised by this package."""

    code = "error"


class ValidationError(TropError, ValueError):
    code = "validation"


class ComputationError(TropError, ArithmeticError):
    code = "computation"


class DivisionByBottom(ComputationError, ZeroDivisionError):
    pass


class BottomToNonpositivePower(ValidationError):
    pass


class UnsortedNodes(ValidationError):
    pass


class MissingAnchor(ValidationError):
    pass


class NotPiecewiseLinear(ComputationError):
    """Raised when a pointwise result would take a value at a node that is
    neither one-sided limit (an isolated point value)."""


class XOutOfRange(ValidationError):
    pass


class DegenerateCharacteristic(ComputationError):
    pass


class NoPolesInWindow(ComputationError):
    pass


class ComponentHasPole(ValidationError):
    pass


class CommonRoot(ValidationError):
    def __init__(self, x):
        super().__init__(f"all components have a root at x={x}")
        self.x = x


class DimensionMismatch(ValidationError):
    pass


class TooManyFunctions(ValidationError):
    pass


class ZeroShift(ValidationError):
    pass


class MalformedWitness(ValidationError):
    pass


class AllBottom(ComputationError):
    pass


class BadParams(ValidationError):
    pass
