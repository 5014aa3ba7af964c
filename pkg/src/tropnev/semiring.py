"""Max-plus scalars over the rationals, with a bottom element for -inf."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Optional, Union

from .errors import BottomToNonpositivePower, DivisionByBottom, ValidationError

RationalLike = Union[int, Fraction, str]


def to_fraction(value: RationalLike) -> Fraction:
    """Parse an exact rational. Floats are refused so nothing silently rounds."""
    if isinstance(value, bool) or isinstance(value, float):
        raise ValidationError(f"expected an exact rational, got {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"not a rational: {value!r}") from exc
    raise ValidationError(f"not a rational: {value!r}")


def format_fraction(q: Fraction) -> str:
    return str(q)


@total_ordering
@dataclass(frozen=True)
class TropScalar:
    """A finite rational, or bottom (``value is None``)."""

    value: Optional[Fraction]

    def __post_init__(self):
        if self.value is not None and not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", to_fraction(self.value))

    @property
    def is_bottom(self) -> bool:
        return self.value is None

    def __lt__(self, other: TropScalar) -> bool:
        if not isinstance(other, TropScalar):
            return NotImplemented
        if self.value is None:
            return other.value is not None
        if other.value is None:
            return False
        return self.value < other.value

    def oplus(self, other: TropScalar) -> TropScalar:
        return max(self, other)

    def otimes(self, other: TropScalar) -> TropScalar:
        if self.value is None or other.value is None:
            return BOTTOM
        return TropScalar(self.value + other.value)

    def oslash(self, other: TropScalar) -> TropScalar:
        if other.value is None:
            raise DivisionByBottom("division by 0∘")
        if self.value is None:
            return BOTTOM
        return TropScalar(self.value - other.value)

    def __str__(self) -> str:
        return "-inf" if self.value is None else format_fraction(self.value)


BOTTOM = TropScalar(None)
ONE = TropScalar(Fraction(0))


def trop(value) -> TropScalar:
    """Coerce ints, Fractions, strings ("p/q", "-inf") and None to a scalar."""
    if isinstance(value, TropScalar):
        return value
    if value is None:
        return BOTTOM
    if isinstance(value, str) and value.strip() in ("-inf", "0o", "bottom"):
        return BOTTOM
    return TropScalar(to_fraction(value))


def scalar_combine(op: str, a, b) -> TropScalar:
    """Apply ``op`` in {"+", "*", "/"} (also the symbols ⊕, ⊗, ⊘)."""
    a, b = trop(a), trop(b)
    if op in ("+", "⊕", "oplus"):
        return a.oplus(b)
    if op in ("*", "⊗", "otimes"):
        return a.otimes(b)
    if op in ("/", "⊘", "oslash"):
        return a.oslash(b)
    raise ValidationError(f"unknown operation {op!r}")


def scalar_pow(a, alpha: RationalLike) -> TropScalar:
    a, alpha = trop(a), to_fraction(alpha)
    if a.is_bottom:
        if alpha <= 0:
            raise BottomToNonpositivePower("0∘ raised to a nonpositive power")
        return BOTTOM
    return TropScalar(alpha * a.value)
