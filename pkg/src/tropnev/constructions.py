"""Named functions, curves and counterexamples, and the ultra-discrete
equation extender."""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .curves import HolCurve, HomPoly, hyper_defect, make_curve, make_hompoly
from .errors import BadParams, NotPiecewiseLinear, ValidationError
from .plfun import (
    LEFT,
    RIGHT,
    FinitePL,
    LazyPL,
    Node,
    affine,
    constant,
    eval_at,
    make_finite_pl,
    one_sided_limits,
    pl_combine,
    pl_max,
    pl_shift,
    register_lazy,
    restrict,
    tent,
)
from .semiring import to_fraction
from .troplin import degree_of_degeneracy, make_combo, monomial_count, monomials


def example_pj() -> FinitePL:
    """The worked example on [-4, 4], continued by its boundary rays.

    Pieces: -x-2 on [-4,-2), max{-x-1, 2x+2} on [-2,0), -x+1 on [0,1],
    -max{x-4, 2x-6} on (1,4), and f(4) = -1.
    """
    return make_finite_pl(-1, [
        (-2, 0, 1, RIGHT),
        (-1, 0, 0, LEFT),
        (0, 2, 1, RIGHT),
        (1, 0, 3, LEFT),
        (2, 2, 2, LEFT),
        (4, -2, -1, RIGHT),
    ], -2)


def two_peak(alpha, beta) -> FinitePL:
    """max{-α|x - 1/α| + 1, -β|x + 2/β| + 2}."""
    alpha, beta = to_fraction(alpha), to_fraction(beta)
    if alpha <= 0 or beta <= 0:
        raise BadParams("two_peak needs alpha > 0 and beta > 0")
    return pl_max([tent(1 / alpha, alpha, 1), tent(-2 / beta, beta, 2)])


def counterexample_fa() -> tuple[FinitePL, FinitePL]:
    f = tent(0, 1, 1)
    a = pl_max([tent(-2, 1, 1), tent(2, 1, 1), constant(0)])
    return f, a


def jump_counterexample() -> tuple[FinitePL, FinitePL]:
    """f = 2 (x <= 1), 3 - 2x (x > 1);  g = 1/2 (x <= 2), 0 (x > 2)."""
    f = make_finite_pl(0, [(1, 2, 1, LEFT)], -2)
    g = make_finite_pl(0, [(2, Fraction(1, 2), 0, LEFT)], 0)
    return f, g


def jump_counterexample_report(r=3) -> dict:
    """J(r,f), J(r,g), J(r,f⊕g) for the pair above, with the ⊕-max check.

    The printed reference values (1, 1/2, 3/2) omit the 1/2 factor in the
    definition of J; ``factor_two`` flags that they are exactly twice ours.
    """
    r = to_fraction(r)
    if r <= 2:
        raise BadParams("the counterexample is stated for r > 2")
    from .nevanlinna import jump_count

    f, g = jump_counterexample()
    jf, jg, jfg = (jump_count(h, r) for h in (f, g, pl_max([f, g])))
    printed = (Fraction(1), Fraction(1, 2), Fraction(3, 2))
    return {"J_f": jf, "J_g": jg, "J_fg": jfg, "max_violated": jfg > max(jf, jg),
            "printed": printed, "factor_two": all(p == 2 * v for p, v in zip(printed, (jf, jg, jfg)))}


# --- hyper-exponentials -----------------------------------------------------


def hyperexp_value(alpha, x) -> Fraction:
    """e_α(x) for |α| > 1, or e_β(x) with β = α for |α| < 1."""
    alpha, x = to_fraction(alpha), to_fraction(x)
    m = math.floor(x)
    frac = x - m
    if abs(alpha) > 1:
        return alpha**m * (frac + 1 / (alpha - 1))
    return alpha**m * (1 / (1 - alpha) - frac)


def _hyperexp_slope(alpha: Fraction, m: int) -> Fraction:
    return alpha**m if abs(alpha) > 1 else -(alpha**m)


@register_lazy("hyperexp")
def _hyperexp_from_params(params: dict) -> LazyPL:
    return hyperexp(params["alpha"])


def hyperexp(alpha) -> LazyPL:
    """The PL solution of y(x+1) = α·y(x) built on integer breakpoints."""
    alpha = to_fraction(alpha)
    if alpha == 0 or abs(alpha) == 1:
        raise BadParams("hyperexp needs alpha != 0 and |alpha| != 1")

    def gen(r):
        lo, hi = math.floor(-r) - 1, math.ceil(r) + 1
        nodes = []
        for m in range(lo, hi + 1):
            v = hyperexp_value(alpha, m)
            nodes.append((m, v, v))
        return make_finite_pl(_hyperexp_slope(alpha, lo - 1), nodes, _hyperexp_slope(alpha, hi))

    return LazyPL(gen, name="hyperexp", params={"alpha": str(alpha)})


# --- tent sequences (ruler function, distribution construction) -------------


class TentSequence:
    """Adjacent tents of heights a_1, a_2, ... with apexes at
    b(n) = 2 S(n) - a_n, where S is the partial sum. Prefix sums are
    memoized under a lock."""

    def __init__(self, term: Callable[[int], Fraction]):
        self._term = term
        self._lock = threading.Lock()
        self._a: list = [None]
        self._s: list = [Fraction(0)]

    def _extend(self, n: int):
        with self._lock:
            while len(self._s) <= n:
                k = len(self._s)
                a = self._term(k)
                self._a.append(a)
                self._s.append(self._s[-1] + a)

    def a(self, n: int):
        if n < 1:
            raise ValidationError("sequence starts at n = 1")
        self._extend(n)
        return self._a[n]

    def partial_sum(self, n: int):
        self._extend(n)
        return self._s[n]

    def b(self, n: int):
        return 2 * self.partial_sum(n) - self.a(n)

    def m_of_r(self, r) -> int:
        """max{n : b(n) <= r}, 0 if there is none."""
        r = to_fraction(r)
        n = 1
        while self.b(n) <= r:
            n *= 2
        lo, hi = 0, n  # b(lo) <= r < b(hi), with b(0) read as -inf
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.b(mid) <= r:
                lo = mid
            else:
                hi = mid
        return lo

    def function_window(self, r: Fraction) -> FinitePL:
        nodes = []
        n = 1
        while True:
            start = 2 * self.partial_sum(n - 1)
            if start > r:
                break
            apex = self.b(n)
            if not nodes or nodes[-1][0] != start:
                nodes.append((start, 0, 0))
            if apex != start:
                h = self.a(n)
                nodes.append((apex, h, h))
            n += 1
        return make_finite_pl(1, nodes, -1)


class RulerData(TentSequence):
    """a(n) = 1 + (exponent of 2 in n): 1, 2, 1, 3, 1, 2, 1, 4, ..."""

    def __init__(self):
        super().__init__(lambda n: (n & -n).bit_length())


_RULER = RulerData()


def ruler_data() -> RulerData:
    return _RULER


@register_lazy("ruler")
def _ruler_from_params(params: dict) -> LazyPL:
    return ruler()


def ruler() -> LazyPL:
    """max_n {-|x - b(n)| + a_n} over the ruler sequence."""
    data = _RULER
    return LazyPL(data.function_window, name="ruler", params={})


def van_der_corput(n: int, base: int = 2) -> Fraction:
    q, denom = Fraction(0), 1
    while n:
        n, digit = divmod(n, base)
        denom *= base
        q += Fraction(digit, denom)
    return q


def generalized_inverse(F: FinitePL, u) -> Fraction:
    """inf{x in [0,1] : F(x) >= u} for a non-decreasing PL F."""
    u = to_fraction(u)
    pts = sorted({Fraction(0), Fraction(1), *(x for x in F.xs if 0 < x < 1)})
    for p, q in zip(pts, pts[1:]):
        if eval_at(F, p) >= u:
            return p
        start = one_sided_limits(F, p)[1]
        if start >= u:
            return p
        end = one_sided_limits(F, q)[0]
        if end >= u:
            return p + (u - start) * (q - p) / (end - start)
    return Fraction(1)


def _check_cdf(F: FinitePL):
    if eval_at(F, 0) != 0 or eval_at(F, 1) != 1:
        raise BadParams("F must satisfy F(0) = 0 and F(1) = 1")
    pts = sorted({Fraction(0), Fraction(1), *(x for x in F.xs if 0 < x < 1)})
    for p, q in zip(pts, pts[1:]):
        lo_p, hi_p = one_sided_limits(F, p)
        lo_q, _ = one_sided_limits(F, q)
        if hi_p < lo_p or lo_q < hi_p:
            raise BadParams("F must be non-decreasing on [0, 1]")


@register_lazy("distribution")
def _distribution_from_params(params: dict) -> LazyPL:
    from .serialize import pl_from_json

    return distribution(pl_from_json(params["F"]))


def distribution(F: FinitePL) -> LazyPL:
    """Tent sequence with pole values a_n = F⁻(vdC₂(n))."""
    _check_cdf(F)
    seq = TentSequence(lambda n: generalized_inverse(F, van_der_corput(n)))
    from .serialize import pl_to_json

    return LazyPL(seq.function_window, name="distribution", params={"F": pl_to_json(F)})


def distribution_sequence(F: FinitePL) -> TentSequence:
    _check_cdf(F)
    return TentSequence(lambda n: generalized_inverse(F, van_der_corput(n)))


# --- entire pair with ψ < Ψ -------------------------------------------------


class OscillatingValues:
    """Integer values of the pair: F(n) = G(n) at even n and G(n) = s F(n)
    at odd n, with g affine on [2k, 2k+2] and f affine on [2k-1, 2k+1]."""

    def __init__(self, s: Fraction):
        self.s = s
        self._lock = threading.Lock()
        self.F = [Fraction(1), Fraction(1)]
        self.G = [Fraction(1), s]

    def extend(self, n: int):
        with self._lock:
            F, G = self.F, self.G
            while len(F) <= n:
                k = len(F)
                if k % 2 == 0:
                    G.append(2 * G[k - 1] - G[k - 2])
                    F.append(G[k])
                else:
                    F.append(2 * F[k - 1] - F[k - 2])
                    G.append(self.s * F[k])

    def window(self, values: list, r: Fraction) -> FinitePL:
        top = math.ceil(r) + 2
        self.extend(top)
        nodes = [(k, values[k], values[k]) for k in range(top + 1)]
        return make_finite_pl(0, nodes, values[top] - values[top - 1])


_OSC_CACHE: dict = {}
_OSC_LOCK = threading.Lock()


def _osc(s: Fraction) -> OscillatingValues:
    with _OSC_LOCK:
        if s not in _OSC_CACHE:
            _OSC_CACHE[s] = OscillatingValues(s)
        return _OSC_CACHE[s]


@register_lazy("oscillating_f")
def _osc_f_from_params(params: dict) -> LazyPL:
    return oscillating_pair(params["s"])[0]


@register_lazy("oscillating_g")
def _osc_g_from_params(params: dict) -> LazyPL:
    return oscillating_pair(params["s"])[1]


def oscillating_pair(s=2) -> tuple[LazyPL, LazyPL]:
    """Entire f <= g with f/g = 1 at even integers and 1/s at odd ones."""
    s = to_fraction(s)
    if s <= 1:
        raise BadParams("oscillating_pair needs s > 1")
    vals = _osc(s)
    f = LazyPL(lambda r: vals.window(vals.F, r), name="oscillating_f", params={"s": str(s)})
    g = LazyPL(lambda r: vals.window(vals.G, r), name="oscillating_g", params={"s": str(s)})
    return f, g


def oscillating_curve(s=2) -> tuple[HolCurve, HomPoly]:
    f, g = oscillating_pair(s)
    return make_curve([f, g]), make_hompoly([((1, 0), 0)])


# --- curves -----------------------------------------------------------------


def t_curve(t, n: int = 1, d=1, use_x1: bool = False) -> tuple[HolCurve, HomPoly]:
    """[t|x| : |x+1| : 0 : ... : 0] with P = x0^d (or x1^d, forced for t = 1)."""
    t, d = to_fraction(t), to_fraction(d)
    if not 0 <= t <= 1:
        raise BadParams("t must lie in [0, 1]")
    if n < 1 or d <= 0:
        raise BadParams("need n >= 1 and d > 0")
    comps = [make_finite_pl(-t, [(0, 0, 0)], t), make_finite_pl(-1, [(-1, 0, 0)], 1)]
    comps += [constant(0)] * (n - 1)
    exps = [Fraction(0)] * (n + 1)
    exps[1 if (use_x1 or t == 1) else 0] = d
    return make_curve(comps), make_hompoly([(exps, 0)])


def e2_curve() -> HolCurve:
    return make_curve([constant(0), hyperexp(2)])


def growth_condition_demo(r) -> dict:
    """The curve (0, e₂) with P₀ = P₁ = P₂ = x₀⊕x₁ (n = 1, M = 1, q = 2).

    P_j∘f = e₂, the Casoratian of two copies is 3e₂, and the root count of
    the extra hypersurface equals T(r, 1∘⊘e₂), so it is not o(T_f(r)).
    """
    from .curves import cartan_characteristic, compose
    from .nevanlinna import characteristic, count_poles
    from .plfun import negate
    from .troplin import casorati

    r = to_fraction(r)
    e = hyperexp(2)
    curve = e2_curve()
    P = make_hompoly([((1, 0), 0), ((0, 1), 0)])
    pf = compose(P, curve)
    cas = casorati([pf, pf], 1, r)
    three_e = restrict(pl_combine([(3, e.materialize(r))]), -r, r)
    n_extra = count_poles(negate(pf.materialize(r)), r)[1]
    t_recip = characteristic(negate(e.materialize(r)), r).T
    return {"casorati_is_3e2": cas == three_e, "N_extra": n_extra, "T_recip_e2": t_recip,
            "T_f": cartan_characteristic(curve, r), "N_equals_T": n_extra == t_recip}


def griffiths_demo(q: int, n: int, d: int) -> dict:
    """q+1 copies of the degenerate hypersurface on the t = 0 curve.

    The defects are computed exactly and λ is the degree of degeneracy of
    the q - M polynomials beyond the first M + 1, each written over the
    monomial basis of the curve.
    """
    M = monomial_count(n, d) - 1
    if q <= M:
        raise BadParams(f"need q > M = {M}")
    curve, P = t_curve(0, n, d)
    deltas = [hyper_defect(P, curve).value for _ in range(q + 1)]
    basis_exps = monomials(n, d)
    basis = [pl_combine([(e, f) for e, f in zip(exps, curve.components) if e])
             for exps in basis_exps]
    target = tuple(int(e) for e in P.terms[0][0])
    coeffs = [0 if exps == target else None for exps in basis_exps]
    combos = [make_combo(basis, coeffs) for _ in range(q - M)]
    lam = degree_of_degeneracy(combos)
    bound = Fraction(n + 1 + lam, d)
    total = sum(deltas, Fraction(0))
    return {"q": q, "n": n, "d": d, "M": M, "lambda": lam, "defect_sum": total,
            "bound": bound, "violated": total > bound}


# --- ultra-discrete equations -----------------------------------------------


@dataclass(frozen=True)
class TwoVarTropRational:
    """R(x, y) = max_i(a_i + b_i x + c_i y) - max_j(a_j + b_j x + c_j y)."""

    numerator: tuple
    denominator: tuple

    def __call__(self, x, y) -> Fraction:
        return (max(a + b * x + c * y for a, b, c in self.numerator)
                - max(a + b * x + c * y for a, b, c in self.denominator))

    def compose(self, y: FinitePL) -> FinitePL:
        """x -> R(x, y(x))."""
        ident = affine(1, 0)

        def side(terms):
            return pl_max([pl_combine([(b, ident), (c, y)], a) for a, b, c in terms])

        return pl_combine([(1, side(self.numerator)), (-1, side(self.denominator))])


def make_two_var(numerator: Sequence, denominator: Sequence = ((0, 0, 0),)) -> TwoVarTropRational:
    num = tuple(tuple(to_fraction(v) for v in t) for t in numerator)
    den = tuple(tuple(to_fraction(v) for v in t) for t in denominator)
    if not num or not den or any(len(t) != 3 for t in num + den):
        raise ValidationError("term lists must be nonempty (a, b, c) triples")
    return TwoVarTropRational(num, den)


def splice(pieces: Sequence[tuple]) -> FinitePL:
    """Join ``(lo, hi, f)`` pieces on consecutive half-open intervals [lo, hi)."""
    nodes = []
    prev = None
    for lo, hi, f in pieces:
        lo = to_fraction(lo)
        right = one_sided_limits(f, lo)[1]
        left = one_sided_limits(prev if prev is not None else f, lo)[0]
        value = eval_at(f, lo)
        if value == left:
            side = LEFT
        elif value == right:
            side = RIGHT
        else:
            raise NotPiecewiseLinear(f"isolated value at x={lo}")
        nodes.append(Node(lo, left, right, side))
        nodes.extend(n for n in f.nodes if lo < n.x < hi)
        prev = f
    first_lo, _, first = pieces[0]
    last_hi = to_fraction(pieces[-1][1])
    return make_finite_pl(first.slope_at(to_fraction(first_lo), LEFT), nodes,
                          prev.slope_at(last_hi, LEFT))


def ultradiscrete_extend(R: TwoVarTropRational, init: FinitePL, span: int) -> FinitePL:
    """Solve y(x+1) + y(x-1) = R(x, y(x)) from data on [0, 2).

    The equation at x in [1, 2) gives y on [2, 3), and at x in [0, 1) it
    gives y on [-1, 0), so y(span + 2) is produced by the recursion rather
    than read from ``init``. Returns y restricted to [-span, span + 2].
    """
    if span < 1:
        raise ValidationError("span must be a positive integer")
    pieces = {0: init, 1: init}  # k -> function valid on [k, k+1)
    for k in range(2, span + 3):
        # y(t) = R(t-1, y(t-1)) - y(t-2)
        h = R.compose(restrict(pieces[k - 1], k - 1, k))
        pieces[k] = pl_combine([(1, pl_shift(h, -1)), (-1, pl_shift(pieces[k - 2], -2))])
    for k in range(-1, -span - 1, -1):
        # y(t) = R(t+1, y(t+1)) - y(t+2)
        h = R.compose(restrict(pieces[k + 1], k + 1, k + 2))
        pieces[k] = pl_combine([(1, pl_shift(h, 1)), (-1, pl_shift(pieces[k + 2], 2))])
    whole = splice([(k, k + 1, pieces[k]) for k in range(-span, span + 3)])
    return restrict(whole, -span, span + 2)


def _param(params: dict, key: str, default=None):
    v = params.get(key, default)
    if v is None:
        raise BadParams(f"missing parameter {key!r}")
    return v


_CATALOG: dict[str, Callable[[dict], object]] = {
    "example_pj": lambda p: example_pj(),
    "two_peak": lambda p: two_peak(_param(p, "alpha"), _param(p, "beta")),
    "counterexample_fa": lambda p: counterexample_fa(),
    "jump_counterexample": lambda p: jump_counterexample(),
    "jump_counterexample_report": lambda p: jump_counterexample_report(p.get("r") or 3),
    "hyperexp": lambda p: hyperexp(_param(p, "alpha")),
    "ruler": lambda p: ruler(),
    "distribution": lambda p: distribution(_param(p, "F")),
    "oscillating_pair": lambda p: oscillating_pair(p.get("s") or 2),
    "t_curve": lambda p: t_curve(_param(p, "t"), int(p.get("n") or 1), p.get("d") or 1),
    "griffiths_demo": lambda p: griffiths_demo(int(_param(p, "q")), int(_param(p, "n")),
                                               int(_param(p, "d"))),
    "growth_condition_demo": lambda p: growth_condition_demo(p.get("r") or 5),
}

CATALOG_NAMES = tuple(_CATALOG)


def construct(name: str, **params):
    """Build a catalog item by name; unused parameters are ignored."""
    try:
        build = _CATALOG[name]
    except KeyError:
        raise BadParams(f"unknown construction {name!r}") from None
    return build(params)
