"""Tropical holomorphic curves, homogeneous tropical polynomials and the
hypersurface versions of the defect and second main theorem."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .defect import EMPIRICAL, EXACT, DefectEstimate
from .errors import (
    CommonRoot,
    ComponentHasPole,
    DegenerateCharacteristic,
    DimensionMismatch,
    ValidationError,
)
from .nevanlinna import count_poles, count_roots, eventual_line, eventual_slope
from .plfun import (
    FinitePL,
    LazyPL,
    constant,
    corners,
    eval_at,
    negate,
    pl_combine,
    pl_max,
    window,
)
from .semiring import TropScalar, to_fraction, trop

DEFAULT_CHECK_WINDOW = Fraction(10)


@dataclass(frozen=True)
class HolCurve:
    components: tuple

    @property
    def n(self) -> int:
        return len(self.components) - 1

    @property
    def is_finite(self) -> bool:
        return all(isinstance(c, FinitePL) for c in self.components)


def make_curve(components: Sequence, check_window=DEFAULT_CHECK_WINDOW) -> HolCurve:
    """Validate a reduced representation.

    Lazy components are checked on ``[-check_window, check_window]`` only.
    """
    comps = tuple(constant(c) if not isinstance(c, (FinitePL, LazyPL)) else c for c in components)
    if len(comps) < 2:
        raise ValidationError("a curve needs at least two components")
    root_sets = []
    for i, c in enumerate(comps):
        w = window(c, check_window)
        cs = corners(w)
        if isinstance(c, LazyPL):
            cs = [k for k in cs if abs(k.x) < check_window]
        pole = next((k for k in cs if k.kind == "pole"), None)
        if pole is not None:
            raise ComponentHasPole(f"component {i} has a pole at x={pole.x}")
        if any(n.omega for n in w.nodes):
            raise ComponentHasPole(f"component {i} is discontinuous")
        root_sets.append({k.x for k in cs if k.kind == "root"})
    common = set.intersection(*root_sets)
    if common:
        raise CommonRoot(min(common))
    return HolCurve(comps)


def scale_curve(curve: HolCurve, lam) -> HolCurve:
    """Add the constant ``lam`` to every component (the same point of TP^n)."""
    lam = to_fraction(lam)
    return HolCurve(tuple(pl_combine([(1, c)], lam) for c in curve.components))


def curve_norm(curve: HolCurve):
    """x -> max of the components."""
    return pl_max(list(curve.components))


def cartan_characteristic(curve: HolCurve, r) -> Fraction:
    r = to_fraction(r)
    comps = [window(c, r) for c in curve.components]
    return (max(eval_at(c, r) for c in comps) + max(eval_at(c, -r) for c in comps)) / 2


Coefficient = Union[FinitePL, LazyPL, TropScalar]


@dataclass(frozen=True)
class HomPoly:
    n: int
    d: Fraction
    terms: tuple  # ((exponents...), coefficient)


def make_hompoly(terms: Sequence, d=None) -> HomPoly:
    """``terms`` holds ``(exponents, coefficient)`` pairs. Coefficients may be
    rationals, TropScalars or PL functions; 0∘ coefficients are dropped."""
    clean = []
    n = None
    for exps, coeff in terms:
        exps = tuple(to_fraction(e) for e in exps)
        if any(e < 0 for e in exps):
            raise ValidationError("exponents must be nonnegative")
        if n is None:
            n = len(exps) - 1
        elif len(exps) - 1 != n:
            raise DimensionMismatch("terms have different numbers of variables")
        if d is None:
            d = sum(exps)
        if sum(exps) != to_fraction(d):
            raise ValidationError(f"exponents {exps} do not sum to the degree {d}")
        if not isinstance(coeff, (FinitePL, LazyPL)):
            coeff = trop(coeff)
            if coeff.is_bottom:
                continue
        clean.append((exps, coeff))
    if not clean:
        raise ValidationError("a homogeneous polynomial needs a term with a finite coefficient")
    d = to_fraction(d)
    if d <= 0 or n is None or n < 1:
        raise ValidationError("need degree > 0 and at least two variables")
    return HomPoly(n, d, tuple(clean))


def monomial(exps: Sequence, coeff=0) -> HomPoly:
    return make_hompoly([(exps, coeff)])


def compose(P: HomPoly, curve: HolCurve):
    """x -> max over terms of coeff(x) + Σ α_i f_i(x)."""
    if P.n != curve.n:
        raise DimensionMismatch(f"polynomial in {P.n + 1} variables, curve has {curve.n + 1} components")
    parts = []
    for exps, coeff in P.terms:
        lin = [(e, f) for e, f in zip(exps, curve.components) if e != 0]
        if isinstance(coeff, TropScalar):
            parts.append(pl_combine(lin, coeff.value) if lin else constant(coeff.value))
        else:
            parts.append(pl_combine(lin + [(1, coeff)]))
    return pl_max(parts)


def _is_exact(P: HomPoly, curve: HolCurve) -> bool:
    return curve.is_finite and all(not isinstance(c, LazyPL) for _, c in P.terms)


@dataclass(frozen=True)
class PsiBounds:
    psi: Fraction
    Psi: Fraction
    exact: bool
    samples: tuple = ()


def _psi_ratio(pf: FinitePL, curve: HolCurve, d: Fraction, r: Fraction) -> Fraction:
    t = cartan_characteristic(curve, r)
    if t == 0:
        raise DegenerateCharacteristic(f"T_f vanishes at r={r}")
    return (eval_at(pf, r) + eval_at(pf, -r)) / (2 * d * t)


def _windowed(curve: HolCurve, r: Fraction) -> HolCurve:
    return HolCurve(tuple(window(c, r) for c in curve.components))


def _tail(values):
    return values[len(values) // 2:]


def _schedule(schedule) -> list[Fraction]:
    if schedule is None:
        raise ValidationError("a schedule is required for lazy curves or coefficients")
    rs = [to_fraction(r) for r in schedule]
    if not rs or rs[0] <= 0 or any(b <= a for a, b in zip(rs, rs[1:])):
        raise ValidationError("schedule must be positive and increasing")
    return rs


def _cartan_slope(curve: HolCurve) -> Fraction:
    norm = curve_norm(curve)
    s = eventual_slope(lambda r: cartan_characteristic(curve, r), norm)
    if s == 0:
        raise DegenerateCharacteristic("the curve has bounded characteristic")
    return s


def psi_bounds(P: HomPoly, curve: HolCurve, schedule: Optional[Sequence] = None) -> PsiBounds:
    if _is_exact(P, curve):
        pf = compose(P, curve)
        norm = curve_norm(curve)
        num = eventual_line(lambda r: (eval_at(pf, r) + eval_at(pf, -r)) / 2, pf, norm)[0]
        v = num / (P.d * _cartan_slope(curve))
        return PsiBounds(v, v, True)
    rs = _schedule(schedule)
    big = _windowed(curve, rs[-1])
    pf = window(compose(P, curve), rs[-1])
    ratios = [_psi_ratio(pf, big, P.d, r) for r in rs]
    tail = _tail(ratios)
    return PsiBounds(min(tail), max(tail), False, tuple(zip(rs, ratios)))


def _root_ratio(npf: FinitePL, curve: HolCurve, d: Fraction, r: Fraction) -> Fraction:
    t = cartan_characteristic(curve, r)
    if t == 0:
        raise DegenerateCharacteristic(f"T_f vanishes at r={r}")
    return count_poles(npf, r)[1] / (d * t)


def hyper_defect(P: HomPoly, curve: HolCurve, schedule: Optional[Sequence] = None) -> DefectEstimate:
    """1 - limsup N(r, 1∘⊘(P∘f)) / (d T_f(r))."""
    if _is_exact(P, curve):
        npf = negate(compose(P, curve))
        num = eventual_slope(lambda r: count_poles(npf, r)[1], npf, curve_norm(curve))
        v = 1 - num / (P.d * _cartan_slope(curve))
        return DefectEstimate(v, v, EXACT)
    rs = _schedule(schedule)
    big = _windowed(curve, rs[-1])
    npf = negate(window(compose(P, curve), rs[-1]))
    ratios = [_root_ratio(npf, big, P.d, r) for r in rs]
    tail = _tail(ratios)
    return DefectEstimate(1 - max(tail), 1 - min(tail), EMPIRICAL, None, tuple(rs), tuple(ratios))


@dataclass(frozen=True)
class HyperSmtReport:
    psi: Fraction
    Psi: Fraction
    rows: tuple  # (r, ratio, coefficient pole ratio)
    violations: tuple  # tail radii outside the band
    tolerance: Fraction

    @property
    def ok(self) -> bool:
        return not self.violations


def _coefficient_pole_ratio(P: HomPoly, curve: HolCurve, r: Fraction) -> Fraction:
    t = cartan_characteristic(curve, r)
    total = sum((count_poles(c, r)[1] for _, c in P.terms if not isinstance(c, TropScalar)),
                Fraction(0))
    return total / t if t else Fraction(0)


def hyper_smt_check(P: HomPoly, curve: HolCurve, schedule: Sequence,
                    tolerance=Fraction(1, 100)) -> HyperSmtReport:
    """(1/d) N(r, 1∘⊘(P∘f)) / T_f(r) along the schedule, against [ψ, Ψ]."""
    rs = _schedule(schedule)
    tolerance = to_fraction(tolerance)
    band = psi_bounds(P, curve, rs)
    big = _windowed(curve, rs[-1])
    npf = negate(window(compose(P, curve), rs[-1]))
    rows = tuple((r, _root_ratio(npf, big, P.d, r), _coefficient_pole_ratio(P, big, r)) for r in rs)
    bad = tuple(r for r, q, _ in _tail(rows)
                if q < band.psi - tolerance or q > band.Psi + tolerance)
    return HyperSmtReport(band.psi, band.Psi, rows, bad, tolerance)


@dataclass(frozen=True)
class SumSmtReport:
    psi_sum: Fraction
    Psi_sum: Fraction
    rows: tuple  # (r, Σ ratios)
    violations: tuple


def hyper_smt_sum_check(Ps: Sequence[HomPoly], curve: HolCurve, schedule: Sequence,
                        tolerance=Fraction(1, 100)) -> SumSmtReport:
    reports = [hyper_smt_check(P, curve, schedule, tolerance) for P in Ps]
    psi_sum = sum((rep.psi for rep in reports), Fraction(0))
    Psi_sum = sum((rep.Psi for rep in reports), Fraction(0))
    rows = tuple(
        (r, sum((rep.rows[i][1] for rep in reports), Fraction(0)))
        for i, r in enumerate(r for r, _, _ in reports[0].rows)
    )
    tol = to_fraction(tolerance) * len(Ps)
    bad = tuple(r for r, s in _tail(rows) if s < psi_sum - tol or s > Psi_sum + tol)
    return SumSmtReport(psi_sum, Psi_sum, rows, bad)


@dataclass(frozen=True)
class Dim1Report:
    rows: tuple  # (r, T_f, N(r, 1∘⊘(P∘f)), residual, bridge residual)
    residual_slope: Optional[Fraction]
    bridge_slope: Optional[Fraction]


def dim1_check(curve: HolCurve, a: Sequence, schedule: Optional[Sequence] = None) -> Dim1Report:
    """Residual T_f(r) - N(r, 1∘⊘(P∘f)) for P = (a0⊗x0) ⊕ (a1⊗x1), and the
    bridge to the one-variable counting functions of q = f1 ⊘ f0 at the
    target a0 ⊘ a1."""
    if curve.n != 1:
        raise DimensionMismatch("dim1_check needs a curve with two components")
    a0, a1 = (to_fraction(v) for v in a)
    P = make_hompoly([((1, 0), a0), ((0, 1), a1)])
    f0, f1 = curve.components
    target = a0 - a1

    def pieces(cv: HolCurve):
        g0, g1 = cv.components
        npf = negate(compose(P, cv))
        q = pl_combine([(1, g1), (-1, g0)])
        qa = pl_max([q, constant(target)])
        return npf, q, qa, negate(qa)

    def residual(cv, npf, r):
        return cartan_characteristic(cv, r) - count_poles(npf, r)[1]

    def bridge(npf, q, qa, nqa, r):
        return count_poles(npf, r)[1] - (
            count_poles(nqa, r)[1] + count_poles(q, r)[1] - count_poles(qa, r)[1]
        )

    rows = ()
    if schedule is not None:
        rs = _schedule(schedule)
        big = _windowed(curve, rs[-1])
        npf, q, qa, nqa = pieces(big)
        rows = tuple(
            (r, cartan_characteristic(big, r), count_poles(npf, r)[1], residual(big, npf, r),
             bridge(npf, q, qa, nqa, r))
            for r in rs
        )
    res_slope = bridge_slope = None
    if curve.is_finite:
        npf, q, qa, nqa = pieces(curve)
        fs = (npf, q, qa, nqa, curve_norm(curve))
        res_slope = eventual_slope(lambda r: residual(curve, npf, r), *fs)
        bridge_slope = eventual_slope(lambda r: bridge(npf, q, qa, nqa, r), *fs)
    return Dim1Report(rows, res_slope, bridge_slope)


def root_count_of_composition(P: HomPoly, curve: HolCurve, r) -> Fraction:
    """N(r, 1∘⊘(P∘f))."""
    r = to_fraction(r)
    return count_roots(window(compose(P, curve), r), r)[1]
