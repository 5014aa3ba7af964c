"""Exact value distribution theory for tropical meromorphic functions.

Piecewise-linear functions with rational data are handled exactly with
``fractions.Fraction``; functions with infinitely many breakpoints are
produced window by window.
"""

from .errors import ComputationError, TropError, ValidationError
from .plfun import FinitePL, LazyPL, Node, make_finite_pl
from .semiring import BOTTOM, TropScalar, trop

__all__ = [
    "BOTTOM",
    "ComputationError",
    "FinitePL",
    "LazyPL",
    "Node",
    "TropError",
    "TropScalar",
    "ValidationError",
    "make_finite_pl",
    "trop",
]
