"""Exact piecewise-linear functions on the real line.

A ``FinitePL`` stores its breakpoints as nodes carrying both one-sided
limits and the side the point value is taken from. Between nodes the
function is the straight line joining the stored limits, and outside the
hull it continues along two rays. Functions with infinitely many
breakpoints are ``LazyPL`` objects that produce a ``FinitePL`` agreeing
with the function on any requested window ``[-r, r]``.
"""

from __future__ import annotations

import threading
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Callable, Iterable, Optional, Sequence, Union

from .errors import MissingAnchor, NotPiecewiseLinear, UnsortedNodes, ValidationError
from .semiring import to_fraction

LEFT, RIGHT = "left", "right"


@dataclass(frozen=True)
class Node:
    x: Fraction
    left: Fraction
    right: Fraction
    side: str = LEFT

    @property
    def value(self) -> Fraction:
        return self.left if self.side == LEFT else self.right

    @property
    def omega(self) -> Fraction:
        """Jump f(x+) - f(x-)."""
        return self.right - self.left


@dataclass(frozen=True)
class CornerRecord:
    x: Fraction
    omega: Fraction
    tau: Fraction
    kind: str  # "root" or "pole"


@dataclass(frozen=True)
class JumpRecord:
    x: Fraction
    omega: Fraction
    h: Fraction
    sign: str  # "positive" or "negative"


@dataclass(frozen=True, eq=True)
class FinitePL:
    """Use :func:`make_finite_pl` to build one; it canonicalizes."""

    left_slope: Fraction
    nodes: tuple[Node, ...]
    right_slope: Fraction
    anchor: Optional[tuple[Fraction, Fraction]] = None

    @cached_property
    def xs(self) -> list[Fraction]:
        return [n.x for n in self.nodes]

    def __call__(self, x) -> Fraction:
        return eval_at(self, x)

    def gap_line(self, i: int) -> tuple[Fraction, Fraction, Fraction]:
        """(slope, x_ref, y_ref) of the piece in gap ``i`` (between nodes i-1 and i)."""
        nodes = self.nodes
        if not nodes:
            return self.left_slope, self.anchor[0], self.anchor[1]
        if i == 0:
            return self.left_slope, nodes[0].x, nodes[0].left
        if i == len(nodes):
            return self.right_slope, nodes[-1].x, nodes[-1].right
        a, b = nodes[i - 1], nodes[i]
        return (b.left - a.right) / (b.x - a.x), a.x, a.right

    def slope_at(self, x, side: str) -> Fraction:
        """One-sided derivative at ``x``."""
        x = to_fraction(x)
        i = bisect_left(self.xs, x)
        on_node = i < len(self.xs) and self.xs[i] == x
        if side == LEFT:
            return self.gap_line(i)[0]
        return self.gap_line(i + 1 if on_node else i)[0]


PLLike = Union[FinitePL, "LazyPL"]


def _slopes_around(left_slope, nodes, right_slope):
    """Incoming and outgoing slope at every node."""
    seg = [left_slope]
    for a, b in zip(nodes, nodes[1:]):
        seg.append((b.left - a.right) / (b.x - a.x))
    seg.append(right_slope)
    return seg


def make_finite_pl(left_slope, nodes: Iterable, right_slope, anchor=None) -> FinitePL:
    """Validate and canonicalize.

    ``nodes`` may hold ``Node`` objects or ``(x, left, right, side)`` tuples.
    Nodes where the function is continuous and the slope does not change are
    dropped, continuous nodes get ``side="left"``, and the affine case keeps
    a single anchor at x = 0.
    """
    left_slope, right_slope = to_fraction(left_slope), to_fraction(right_slope)
    clean = []
    for n in nodes:
        if not isinstance(n, Node):
            x, lo, hi, *rest = n
            n = Node(to_fraction(x), to_fraction(lo), to_fraction(hi), rest[0] if rest else LEFT)
        elif not all(isinstance(v, Fraction) for v in (n.x, n.left, n.right)):
            n = Node(to_fraction(n.x), to_fraction(n.left), to_fraction(n.right), n.side)
        if n.side not in (LEFT, RIGHT):
            raise ValidationError(f"node side must be 'left' or 'right', got {n.side!r}")
        if clean and n.x <= clean[-1].x:
            raise UnsortedNodes(f"node x={n.x} does not follow x={clean[-1].x}")
        clean.append(n)

    if not clean:
        if anchor is None:
            raise MissingAnchor("a function without nodes needs an anchor point")
        if left_slope != right_slope:
            raise ValidationError("a function without nodes must have equal ray slopes")
        x0, y0 = to_fraction(anchor[0]), to_fraction(anchor[1])
        return FinitePL(left_slope, (), right_slope, (Fraction(0), y0 - left_slope * x0))

    seg = _slopes_around(left_slope, clean, right_slope)
    kept = []
    for i, n in enumerate(clean):
        if n.left == n.right:
            if seg[i] == seg[i + 1]:
                continue
            if n.side != LEFT:
                n = Node(n.x, n.left, n.right, LEFT)
        kept.append(n)
    if not kept:
        n = clean[0]
        return FinitePL(left_slope, (), right_slope, (Fraction(0), n.left - left_slope * n.x))
    return FinitePL(left_slope, tuple(kept), right_slope, None)


def affine(slope, intercept=0) -> FinitePL:
    return make_finite_pl(slope, (), slope, (0, intercept))


def constant(c) -> FinitePL:
    return affine(0, c)


def from_points(points: Sequence, left_slope, right_slope) -> FinitePL:
    """Continuous PL function through ``(x, y)`` points, rays outside."""
    pts = sorted((to_fraction(x), to_fraction(y)) for x, y in points)
    return make_finite_pl(left_slope, [(x, y, y) for x, y in pts], right_slope)


def tent(center, slope, height) -> FinitePL:
    """``-slope*|x - center| + height``."""
    center, height = to_fraction(center), to_fraction(height)
    return make_finite_pl(slope, [(center, height, height)], -to_fraction(slope))


def one_sided_limits(f: FinitePL, x) -> tuple[Fraction, Fraction]:
    x = to_fraction(x)
    xs = f.xs
    i = bisect_left(xs, x)
    if i < len(xs) and xs[i] == x:
        n = f.nodes[i]
        return n.left, n.right
    s, x0, y0 = f.gap_line(i)
    v = y0 + s * (x - x0)
    return v, v


def eval_at(f: FinitePL, x) -> Fraction:
    x = to_fraction(x)
    xs = f.xs
    i = bisect_left(xs, x)
    if i < len(xs) and xs[i] == x:
        return f.nodes[i].value
    s, x0, y0 = f.gap_line(i)
    return y0 + s * (x - x0)


def _point(f: FinitePL, x: Fraction) -> tuple[Fraction, Fraction, Fraction]:
    """(left limit, right limit, value) at x."""
    xs = f.xs
    i = bisect_left(xs, x)
    if i < len(xs) and xs[i] == x:
        n = f.nodes[i]
        return n.left, n.right, n.value
    s, x0, y0 = f.gap_line(i)
    v = y0 + s * (x - x0)
    return v, v, v


def _node_from(x: Fraction, left: Fraction, right: Fraction, value: Fraction) -> Node:
    if value == left:
        return Node(x, left, right, LEFT)
    if value == right:
        return Node(x, left, right, RIGHT)
    raise NotPiecewiseLinear(
        f"result takes value {value} at x={x}, which is neither one-sided limit ({left}, {right})"
    )


def corners(f: FinitePL) -> list[CornerRecord]:
    out = []
    seg = _slopes_around(f.left_slope, f.nodes, f.right_slope)
    for i, n in enumerate(f.nodes):
        w = seg[i + 1] - seg[i]
        if w:
            out.append(CornerRecord(n.x, w, abs(w), "root" if w > 0 else "pole"))
    return out


def jump_sign(node: Node) -> str:
    """Positive/negative classification; the origin uses the side of the point value."""
    if node.x != 0:
        return "positive" if node.x * node.omega > 0 else "negative"
    return "positive" if node.value == max(node.left, node.right) else "negative"


def jumps(f: FinitePL) -> list[JumpRecord]:
    return [
        JumpRecord(n.x, n.omega, abs(n.omega), jump_sign(n))
        for n in f.nodes
        if n.omega != 0
    ]


def is_continuous(f: FinitePL) -> bool:
    return all(n.omega == 0 for n in f.nodes)


def pl_combine(terms: Sequence[tuple], constant_term=0) -> FinitePL:
    """Sum of ``weight * f`` plus a constant, exactly."""
    terms = [(to_fraction(w), f) for w, f in terms]
    c = to_fraction(constant_term)
    if any(isinstance(f, LazyPL) for _, f in terms):
        return LazyPL.lift(lambda *fs: pl_combine(list(zip((w for w, _ in terms), fs)), c),
                           [f for _, f in terms], name="combine")
    terms = [(w, f) for w, f in terms if w != 0]
    left = sum((w * f.left_slope for w, f in terms), Fraction(0))
    right = sum((w * f.right_slope for w, f in terms), Fraction(0))
    xs = sorted({x for _, f in terms for x in f.xs})
    if not xs:
        y0 = c + sum((w * eval_at(f, 0) for w, f in terms), Fraction(0))
        return make_finite_pl(left, (), right, (0, y0))
    nodes = []
    for x in xs:
        lo = hi = val = c
        for w, f in terms:
            a, b, v = _point(f, x)
            lo += w * a
            hi += w * b
            val += w * v
        nodes.append(_node_from(x, lo, hi, val))
    return make_finite_pl(left, nodes, right)


def negate(f: PLLike) -> PLLike:
    """1∘ ⊘ f."""
    return pl_combine([(-1, f)])


def add_constant(f: PLLike, c) -> PLLike:
    return pl_combine([(1, f)], c)


def _gap_bounds(xs):
    bounds = [None, *xs, None]
    return list(zip(bounds, bounds[1:]))


def _probe(lo, hi) -> Fraction:
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return hi - 1
    if hi is None:
        return lo + 1
    return (lo + hi) / 2


def pl_max(fs: Sequence[PLLike]) -> PLLike:
    """Pointwise maximum, with exact crossing points."""
    fs = list(fs)
    if not fs:
        raise ValidationError("pl_max needs at least one function")
    if any(isinstance(f, LazyPL) for f in fs):
        return LazyPL.lift(lambda *g: pl_max(g), fs, name="max")
    if len(fs) == 1:
        return fs[0]
    xs = sorted({x for f in fs for x in f.xs})
    cands = set(xs)
    for lo, hi in _gap_bounds(xs):
        p = _probe(lo, hi)
        lines = [(f.slope_at(p, LEFT), eval_at(f, p)) for f in fs]
        for (s1, v1), (s2, v2) in combinations(set(lines), 2):
            if s1 == s2:
                continue
            t = p + (v2 - v1) / (s1 - s2)
            if (lo is None or t > lo) and (hi is None or t < hi):
                cands.add(t)
    if not cands:
        best = max(fs, key=lambda f: eval_at(f, 0))
        return best

    cands = sorted(cands)

    def winner_slope(t):
        return max((eval_at(f, t), f.slope_at(t, LEFT)) for f in fs)[1]

    left = winner_slope(cands[0] - 1)
    right = winner_slope(cands[-1] + 1)
    nodes = []
    for x in cands:
        pts = [_point(f, x) for f in fs]
        nodes.append(_node_from(x, max(p[0] for p in pts), max(p[1] for p in pts),
                                max(p[2] for p in pts)))
    return make_finite_pl(left, nodes, right)


def pl_min(fs: Sequence[PLLike]) -> PLLike:
    return negate(pl_max([negate(f) for f in fs]))


def pl_shift(f: PLLike, c) -> PLLike:
    """x -> f(x + c)."""
    c = to_fraction(c)
    if isinstance(f, LazyPL):
        return LazyPL(lambda r: pl_shift(f.materialize(r + abs(c)), c), name="shift")
    if not f.nodes:
        return make_finite_pl(f.left_slope, (), f.right_slope, (f.anchor[0] - c, f.anchor[1]))
    return make_finite_pl(
        f.left_slope,
        [Node(n.x - c, n.left, n.right, n.side) for n in f.nodes],
        f.right_slope,
    )


def pl_equal(f: FinitePL, g: FinitePL) -> bool:
    return f == g


def restrict(f: FinitePL, lo, hi) -> FinitePL:
    """The function equal to ``f`` on ``[lo, hi]``, extended outward along
    the boundary pieces.

    The extension passes through the point values ``f(lo)`` and ``f(hi)``,
    so the result keeps every jump inside the window, including whether
    ``f`` is left- or right-discontinuous at the endpoints. Two functions
    agree on ``[lo, hi]`` exactly when their restrictions are equal.
    """
    lo, hi = to_fraction(lo), to_fraction(hi)
    if lo >= hi:
        raise ValidationError("restrict needs lo < hi")
    _, lo_r, lo_v = _point(f, lo)
    hi_l, _, hi_v = _point(f, hi)
    inner = [n for n in f.nodes if lo < n.x < hi]
    nodes = [Node(lo, lo_v, lo_r, LEFT), *inner, Node(hi, hi_l, hi_v, RIGHT)]
    return make_finite_pl(f.slope_at(lo, RIGHT), nodes, f.slope_at(hi, LEFT))


def hull(f: FinitePL) -> Optional[tuple[Fraction, Fraction]]:
    return (f.xs[0], f.xs[-1]) if f.nodes else None


def infimum(f: FinitePL) -> Optional[Fraction]:
    """inf over the real line, or None for -inf."""
    if f.left_slope > 0 or f.right_slope < 0:
        return None
    if not f.nodes:
        return f.anchor[1]
    return min(min(n.left, n.right) for n in f.nodes)


class LazyPL:
    """A PL function with possibly infinitely many breakpoints.

    ``generator(r)`` must return a ``FinitePL`` that agrees with the
    function on ``[-r, r]``; :meth:`materialize` trims it to that window so
    nested windows agree exactly. Results are memoized; the largest window
    computed so far is reused for smaller requests.
    """

    def __init__(self, generator: Callable[[Fraction], FinitePL], name: str = "lazy",
                 params: Optional[dict] = None):
        self._generator = generator
        self.name = name
        self.params = dict(params or {})
        self._lock = threading.Lock()
        self._cache: dict[Fraction, FinitePL] = {}
        self._widest: Optional[tuple[Fraction, FinitePL]] = None

    def __repr__(self):
        return f"LazyPL({self.name}, {self.params})"

    def __call__(self, x) -> Fraction:
        x = to_fraction(x)
        return eval_at(self.materialize(max(abs(x), Fraction(1))), x)

    @property
    def serializable(self) -> bool:
        return self.name in _LAZY_REGISTRY

    def materialize(self, r) -> FinitePL:
        r = to_fraction(r)
        if r <= 0:
            raise ValidationError("window radius must be positive")
        with self._lock:
            hit = self._cache.get(r)
            if hit is not None:
                return hit
            widest = self._widest
        if widest is not None and widest[0] >= r:
            out = restrict(widest[1], -r, r)
        else:
            out = restrict(self._generator(r), -r, r)
        with self._lock:
            self._cache[r] = out
            if self._widest is None or self._widest[0] < r:
                self._widest = (r, out)
        return out

    @classmethod
    def lift(cls, op: Callable[..., FinitePL], inputs: Sequence, name: str = "lift") -> LazyPL:
        """Pointwise operation of lazy and finite inputs, evaluated per window."""

        def gen(r):
            return op(*[window(f, r) for f in inputs])

        return cls(gen, name=name)


# name -> factory(params) for lazy functions that can be written to JSON
_LAZY_REGISTRY: dict[str, Callable[[dict], LazyPL]] = {}


def register_lazy(name: str):
    def deco(factory):
        _LAZY_REGISTRY[name] = factory
        return factory

    return deco


def lazy_from_descriptor(name: str, params: dict) -> LazyPL:
    try:
        factory = _LAZY_REGISTRY[name]
    except KeyError:
        raise ValidationError(f"unknown lazy function {name!r}") from None
    return factory(params)


def window(f: PLLike, r) -> FinitePL:
    """The FinitePL to use for computations on ``[-r, r]``."""
    if isinstance(f, LazyPL):
        return f.materialize(r)
    return f
