"""Defects of tropical meromorphic functions at constant targets."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DegenerateCharacteristic, NoPolesInWindow, ValidationError
from .nevanlinna import characteristic, count_poles, eventual_slope
from .plfun import FinitePL, constant, negate, pl_max, window
from .semiring import to_fraction

EXACT, EMPIRICAL = "exact-asymptotic", "empirical"


@dataclass(frozen=True)
class DefectEstimate:
    """``lo`` is the limsup-based estimate; ``hi`` uses the tail minimum.
    For the exact method both are the limit."""

    lo: Fraction
    hi: Fraction
    method: str
    target: object = None
    schedule: tuple = ()
    ratios: tuple = ()

    @property
    def value(self) -> Fraction:
        return self.lo

    @property
    def exact(self) -> bool:
        return self.method == EXACT


def _clamp(q: Fraction) -> Fraction:
    return min(max(q, Fraction(0)), Fraction(1))


def defect_exact(f: FinitePL, a) -> Fraction:
    """Limit of (N(r,f) - N(r,f⊕a)) / T(r,f), read off the eventual slopes."""
    if not isinstance(f, FinitePL):
        raise ValidationError("defect_exact needs a FinitePL; use defect_empirical for lazy input")
    a = to_fraction(a)
    g = pl_max([f, constant(a)])
    num = eventual_slope(lambda r: count_poles(f, r)[1] - count_poles(g, r)[1], f, g)
    den = eventual_slope(lambda r: characteristic(f, r).T, f)
    if den == 0:
        if num == 0:
            return Fraction(0)
        raise DegenerateCharacteristic("characteristic is eventually constant but the pole count is not")
    return num / den


def defect_by_roots(f: FinitePL, a) -> Fraction:
    """1 - lim N(r, 1∘⊘(f⊕a)) / T(r,f) for FinitePL f (the defining form)."""
    a = to_fraction(a)
    ng = negate(pl_max([f, constant(a)]))
    num = eventual_slope(lambda r: count_poles(ng, r)[1], f, ng)
    den = eventual_slope(lambda r: characteristic(f, r).T, f)
    if den == 0:
        raise DegenerateCharacteristic("characteristic is eventually constant")
    return 1 - num / den


def _check_schedule(schedule) -> list[Fraction]:
    rs = [to_fraction(r) for r in schedule]
    if len(rs) < 8:
        raise ValidationError("empirical estimates need at least 8 schedule points")
    if rs[0] <= 0 or any(b <= a for a, b in zip(rs, rs[1:])):
        raise ValidationError("schedule must be positive and increasing")
    return rs


def defect_empirical(f, a, schedule: Sequence) -> DefectEstimate:
    """1 - max over the tail half of the schedule of N(r, 1∘⊘(f⊕a)) / T(r, f)."""
    rs = _check_schedule(schedule)
    a = to_fraction(a)
    big = window(f, rs[-1])
    ng = negate(pl_max([big, constant(a)]))
    ratios = []
    for r in rs:
        t = characteristic(big, r).T
        if t == 0:
            raise DegenerateCharacteristic(f"T(r,f) = 0 at r={r}")
        ratios.append(count_poles(ng, r)[1] / t)
    tail = ratios[len(ratios) // 2:]
    return DefectEstimate(_clamp(1 - max(tail)), _clamp(1 - min(tail)), EMPIRICAL, a,
                          tuple(rs), tuple(ratios))


def defect(f, a, schedule: Optional[Sequence] = None) -> DefectEstimate:
    if isinstance(f, FinitePL):
        v = defect_exact(f, a)
        return DefectEstimate(v, v, EXACT, to_fraction(a))
    if schedule is None:
        raise ValidationError("a schedule is required for lazy functions")
    return defect_empirical(f, a, schedule)


@dataclass(frozen=True)
class DefectProfile:
    entries: tuple  # (a, DefectEstimate)
    plateaus: tuple  # (a_min, a_max, value)
    monotone: bool


def defect_profile(f, grid: Sequence, schedule: Optional[Sequence] = None) -> DefectProfile:
    grid = [to_fraction(a) for a in grid]
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValidationError("grid must be sorted")
    entries = [(a, defect(f, a, schedule)) for a in grid]
    plateaus = []
    for a, est in entries:
        if plateaus and plateaus[-1][2] == est.value:
            plateaus[-1][1] = a
        else:
            plateaus.append([a, a, est.value])
    values = [est.value for _, est in entries]
    monotone = all(x <= y for x, y in zip(values, values[1:]))
    return DefectProfile(tuple(entries), tuple(tuple(p) for p in plateaus), monotone)


def unintegrated_ratio(f, a, r) -> Fraction:
    """(n(r,f) - n(r,f⊕a)) / n(r,f)."""
    r = to_fraction(r)
    fw = window(f, r)
    n_f = count_poles(fw, r)[0]
    if n_f == 0:
        raise NoPolesInWindow(f"f has no poles in (-{r}, {r})")
    n_g = count_poles(pl_max([fw, constant(to_fraction(a))]), r)[0]
    return (n_f - n_g) / n_f
