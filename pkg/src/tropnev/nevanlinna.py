"""Proximity, counting, jump-counting and characteristic functions, the
Poisson-Jensen reconstruction, and exact large-r asymptotics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, Union

from .errors import ValidationError, XOutOfRange
from .plfun import (
    LEFT,
    RIGHT,
    FinitePL,
    LazyPL,
    constant,
    corners,
    eval_at,
    jump_sign,
    negate,
    pl_max,
    window,
)
from .semiring import to_fraction

LITERAL, CORRECTED = "paper-literal", "corrected"


def _pos(q: Fraction) -> Fraction:
    return q if q > 0 else Fraction(0)


def _radius(r) -> Fraction:
    r = to_fraction(r)
    if r <= 0:
        raise ValidationError("radius must be positive")
    return r


def as_function(a) -> Union[FinitePL, LazyPL]:
    """Accept a PL function or a rational constant."""
    if isinstance(a, (FinitePL, LazyPL)):
        return a
    return constant(to_fraction(a))


def proximity(f, r) -> Fraction:
    r = _radius(r)
    g = window(f, r)
    return (_pos(eval_at(g, r)) + _pos(eval_at(g, -r))) / 2


def count_poles(f, r) -> tuple[Fraction, Fraction]:
    """(n, N): pole multiplicities in the open window, and the integrated count."""
    r = _radius(r)
    n = N = Fraction(0)
    for c in corners(window(f, r)):
        if c.kind == "pole" and abs(c.x) < r:
            n += c.tau
            N += c.tau * (r - abs(c.x))
    return n, N / 2


def count_roots(f, r) -> tuple[Fraction, Fraction]:
    r = _radius(r)
    n = N = Fraction(0)
    for c in corners(window(f, r)):
        if c.kind == "root" and abs(c.x) < r:
            n += c.tau
            N += c.tau * (r - abs(c.x))
    return n, N / 2


def _counted_jump_nodes(g: FinitePL, r: Fraction):
    """Jump nodes in [-r, r]; a jump at r counts only if f(r) != f(r-), and a
    jump at -r only if f(-r) != f(-r+)."""
    for n in g.nodes:
        if n.omega == 0 or abs(n.x) > r:
            continue
        if n.x == r and n.side != RIGHT:
            continue
        if n.x == -r and n.side != LEFT:
            continue
        yield n


def jump_count(f, r, origin: str = LITERAL) -> Fraction:
    """Half the total height of negative jumps in [-r, r].

    With ``origin="corrected"`` a jump at 0 is counted when its point value
    is the larger limit, which is the classification under which Jensen's
    formula balances; away from the origin both conventions agree.
    """
    r = _radius(r)
    total = Fraction(0)
    for n in _counted_jump_nodes(window(f, r), r):
        sign = jump_sign(n)
        if n.x == 0 and origin == CORRECTED:
            sign = "negative" if sign == "positive" else "positive"
        if sign == "negative":
            total += abs(n.omega)
    return total / 2


@dataclass(frozen=True)
class NevSummary:
    r: Fraction
    m: Fraction
    n: Fraction
    N: Fraction
    J: Fraction
    T: Fraction


def characteristic(f, r, origin: str = LITERAL) -> NevSummary:
    r = _radius(r)
    g = window(f, r)
    m = proximity(g, r)
    n, N = count_poles(g, r)
    J = jump_count(g, r, origin)
    return NevSummary(r, m, n, N, J, m + N + J)


def T(f, r, origin: str = LITERAL) -> Fraction:
    return characteristic(f, r, origin).T


@dataclass(frozen=True)
class PJReport:
    x: Fraction
    r: Fraction
    mode: str
    value_reconstructed: Fraction
    value_direct: Fraction
    residual: Fraction
    terms: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)


def _corner_terms(g: FinitePL, r: Fraction, x: Fraction) -> tuple[Fraction, Fraction]:
    roots = poles = Fraction(0)
    for c in corners(g):
        if abs(c.x) >= r:
            continue
        w = c.tau * (r * r - abs(c.x - x) * r - c.x * x) / (2 * r)
        if c.kind == "root":
            roots -= w
        else:
            poles += w
    return roots, poles


def _corrected_jump_terms(g: FinitePL, r: Fraction, x: Fraction) -> dict:
    # Walking from x to r picks up every jump in (x, r), the jump at x when
    # f(x) = f(x-), and the jump at r when f(r) = f(r+). Walking from -r to
    # x is the mirror image.
    rightward = leftward = Fraction(0)
    for n in g.nodes:
        if n.omega == 0 or abs(n.x) > r:
            continue
        if x < n.x < r or (n.x == x and n.side == LEFT) or (n.x == r and n.side == RIGHT):
            rightward += n.omega
        if -r < n.x < x or (n.x == x and n.side == RIGHT) or (n.x == -r and n.side == LEFT):
            leftward += n.omega
    return {
        "jumps_rightward": -(r + x) * rightward / (2 * r),
        "jumps_leftward": (r - x) * leftward / (2 * r),
    }


def _literal_jump_terms(g: FinitePL, r: Fraction, x: Fraction) -> dict:
    pos, neg = [], []
    for n in _counted_jump_nodes(g, r):
        (pos if jump_sign(n) == "positive" else neg).append((n.x, abs(n.omega)))

    def s(group, lo, hi):
        return sum((h for k, h in group if lo <= k <= hi), Fraction(0))

    zero = Fraction(0)
    lo_x, hi_x = min(zero, x), max(zero, x)
    tilt = (-x / (2 * r)) * (s(neg, -r, zero) + s(pos, zero, r)) + (x / (2 * r)) * (
        s(pos, -r, zero) + s(neg, zero, r)
    )

    def grouped(group):
        return s(group, -r, lo_x) + s(group, hi_x, r) - s(group, x, zero) - s(group, zero, x)

    omega0 = next((n.omega for n in g.nodes if n.x == 0), zero)
    at_x = next((n for n in g.nodes if n.x == x), None)
    if at_x is None or at_x.omega == 0:
        a_term = zero
    elif at_x.side == RIGHT:
        a_term = at_x.omega
    else:
        a_term = -at_x.omega
    b_term = zero if x == 0 else (-omega0 if x < 0 else omega0)
    return {
        "jump_tilt": tilt,
        "positive_jumps": -grouped(pos) / 2,
        "negative_jumps": grouped(neg) / 2,
        "origin_term": -x * omega0 / (2 * r),
        "A_f": a_term,
        "B_f": b_term,
        "AB_term": -(a_term + b_term) / 2,
    }


def poisson_jensen(f, r, x, mode: str = CORRECTED) -> PJReport:
    """Rebuild f(x) from f(±r), corners and jumps on [-r, r].

    ``mode="corrected"`` uses the crossing sets obtained by summing slopes
    and jumps from x out to each boundary, and always reproduces f(x).
    ``mode="paper-literal"`` evaluates the closed form as usually stated, including
    its A_f/B_f correction terms, so its residual can be inspected.
    """
    r, x = _radius(r), to_fraction(x)
    if not -r < x < r:
        raise XOutOfRange(f"x={x} is not inside (-{r}, {r})")
    if mode not in (LITERAL, CORRECTED):
        raise ValidationError(f"unknown mode {mode!r}")
    g = window(f, r)
    fr, fmr = eval_at(g, r), eval_at(g, -r)
    roots, poles = _corner_terms(g, r, x)
    terms = {
        "boundary_average": (fr + fmr) / 2,
        "boundary_tilt": x * (fr - fmr) / (2 * r),
        "root_sum": roots,
        "pole_sum": poles,
    }
    if mode == CORRECTED:
        terms.update(_corrected_jump_terms(g, r, x))
        value = sum(terms.values(), Fraction(0))
    else:
        extra = _literal_jump_terms(g, r, x)
        terms.update(extra)
        value = sum(v for k, v in terms.items() if k not in ("A_f", "B_f"))
    direct = eval_at(g, x)
    return PJReport(x, r, mode, value, direct, value - direct, terms)


def jensen(f, r, mode: str = CORRECTED) -> PJReport:
    rep = poisson_jensen(f, r, 0, mode)
    if mode != CORRECTED:
        return rep
    r = rep.r
    g = window(f, r)
    ng = negate(g)
    identity = (
        proximity(g, r) - proximity(ng, r)
        + count_poles(g, r)[1] - count_poles(ng, r)[1]
        + jump_count(g, r, CORRECTED) - jump_count(ng, r, CORRECTED)
    )
    checks = {"functional_identity": identity, "functional_residual": identity - rep.value_direct}
    return PJReport(rep.x, r, rep.mode, rep.value_reconstructed, rep.value_direct,
                    rep.residual, rep.terms, checks)


def fmt_epsilon(f, a, r) -> Fraction:
    """The error term of the first main theorem at radius r.

    Computed as the difference between both sides of
    T(r, 1∘⊘(f⊕a)) = T(r,f) - N(r,f) + N(r,f⊕a) - J(r,f) + J(r,f⊕a) - (f⊕a)(0) + ε,
    with origin jumps classified the way Jensen's formula needs them.
    """
    r = _radius(r)
    fw, aw = window(f, r), window(as_function(a), r)
    g = pl_max([fw, aw])
    cf, cg = characteristic(fw, r, CORRECTED), characteristic(g, r, CORRECTED)
    lhs = characteristic(negate(g), r, CORRECTED).T
    rhs = cf.T - cf.N + cg.N - cf.J + cg.J - eval_at(g, 0)
    return lhs - rhs


def smt_terms(f, a, r, origin: str = LITERAL) -> dict:
    r = _radius(r)
    fw, aw = window(f, r), window(as_function(a), r)
    g = pl_max([fw, aw])
    ng = negate(g)
    cf, cg, cn = (characteristic(h, r, origin) for h in (fw, g, ng))
    bound = cn.N + cn.J + cf.N - cg.N + cf.J - cg.J
    return {"T": cf.T, "N_recip": cn.N, "J_recip": cn.J, "N_f": cf.N, "N_fa": cg.N,
            "J_f": cf.J, "J_fa": cg.J, "residual": cf.T - bound}


def smt_residual(f, a, r, origin: str = LITERAL) -> Fraction:
    return smt_terms(f, a, r, origin)["residual"]


# --- asymptotics -----------------------------------------------------------


def threshold(*fs: FinitePL) -> Fraction:
    """A radius beyond which m, N, J and T of every argument are affine in r."""
    t = Fraction(0)
    for f in fs:
        if f.nodes:
            x0, y0 = f.nodes[0].x, f.nodes[0].left
            x1, y1 = f.nodes[-1].x, f.nodes[-1].right
            t = max(t, abs(x0), abs(x1))
        else:
            x0, y0 = x1, y1 = f.anchor
        if f.right_slope:
            t = max(t, abs(x1 - y1 / f.right_slope))
        if f.left_slope:
            t = max(t, abs(x0 - y0 / f.left_slope))
    return t


def eventual_line(fn: Callable[[Fraction], Fraction], *fs: FinitePL) -> tuple[Fraction, Fraction]:
    """(slope, intercept) of ``fn`` for r past the threshold of ``fs``."""
    r1 = Fraction(math.floor(threshold(*fs)) + 1)
    v1, v2 = fn(r1), fn(r1 + 1)
    return v2 - v1, v1 - (v2 - v1) * r1


def eventual_slope(fn, *fs: FinitePL) -> Fraction:
    return eventual_line(fn, *fs)[0]


@dataclass(frozen=True)
class AsymptoticProfile:
    threshold: Fraction
    slope_m: Fraction
    slope_N: Fraction
    slope_J: Fraction
    slope_T: Fraction


def asymptotics(f: FinitePL) -> AsymptoticProfile:
    t = threshold(f)
    slope_m = eventual_slope(lambda r: proximity(f, r), f)
    slope_N = eventual_slope(lambda r: count_poles(f, r)[1], f)
    slope_J = eventual_slope(lambda r: jump_count(f, r), f)
    return AsymptoticProfile(t, slope_m, slope_N, slope_J, slope_m + slope_N + slope_J)


def smt_residual_slope(f: FinitePL, a) -> Fraction:
    a = as_function(a)
    g = pl_max([f, a])
    return eventual_slope(lambda r: smt_residual(f, a, r), f, a, g, negate(g))


# --- growth order ----------------------------------------------------------


def log_fraction(q: Fraction) -> float:
    """Natural log of a positive rational of any size."""
    if q <= 0:
        raise ValidationError("log of a nonpositive number")
    return math.log(q.numerator) - math.log(q.denominator)


@dataclass(frozen=True)
class OrderEstimate:
    rho: float
    rho2: float
    exact: bool
    samples: tuple = ()


def order_estimate(f, schedule: Sequence) -> OrderEstimate:
    """Order and hyper-order.

    Exact for FinitePL (the characteristic is eventually affine). For lazy
    functions this samples log T / log r and log log T / log r along the
    schedule and reports the last usable sample.
    """
    if isinstance(f, FinitePL):
        slope = asymptotics(f).slope_T
        return OrderEstimate(1.0 if slope > 0 else 0.0, 0.0, True)
    schedule = [to_fraction(r) for r in schedule]
    if not schedule or any(b <= a for a, b in zip(schedule, schedule[1:])) or schedule[0] <= 0:
        raise ValidationError("schedule must be positive and increasing")
    big = f.materialize(schedule[-1])
    samples = []
    for r in schedule:
        if r <= 1:
            continue
        t = characteristic(big, r).T
        lr = log_fraction(r)
        rho = log_fraction(t) / lr if t > 0 else float("-inf")
        lt = log_fraction(t) if t > 0 else float("-inf")
        rho2 = math.log(lt) / lr if lt > 0 else float("nan")
        samples.append((r, rho, rho2))
    if not samples:
        raise ValidationError("schedule needs radii above 1")
    _, rho, rho2 = samples[-1]
    return OrderEstimate(rho, rho2, False, tuple(samples))


def geometric_schedule(r0, ratio, count: int) -> list[Fraction]:
    r0, ratio = to_fraction(r0), to_fraction(ratio)
    if r0 <= 0 or ratio <= 1 or count < 1:
        raise ValidationError("geometric schedule needs r0 > 0, ratio > 1, count >= 1")
    return [r0 * ratio**i for i in range(count)]


def parse_schedule(spec: str) -> list[Fraction]:
    """``geometric:r0,ratio,count`` or ``linear:start,stop,count`` or a
    comma-separated list of radii."""
    kind, _, body = spec.partition(":")
    if not body:
        return [to_fraction(v) for v in kind.split(",")]
    parts = [p.strip() for p in body.split(",")]
    if kind == "geometric" and len(parts) == 3:
        return geometric_schedule(parts[0], parts[1], int(parts[2]))
    if kind == "linear" and len(parts) == 3:
        start, stop, count = to_fraction(parts[0]), to_fraction(parts[1]), int(parts[2])
        if count < 2 or stop <= start:
            raise ValidationError("linear schedule needs stop > start and count >= 2")
        return [start + (stop - start) * i / (count - 1) for i in range(count)]
    raise ValidationError(f"bad schedule {spec!r}")
