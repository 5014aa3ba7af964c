"""Max-plus linear algebra: determinants, Casoratians, Gondran-Minoux
dependence, shortest representation length and degree of degeneracy."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product
from math import comb
from typing import Optional, Sequence

from .errors import AllBottom, MalformedWitness, TooManyFunctions, ValidationError, ZeroShift
from .plfun import (
    FinitePL,
    LazyPL,
    constant,
    eval_at,
    infimum,
    pl_combine,
    pl_equal,
    pl_max,
    pl_shift,
    restrict,
    window,
)
from .semiring import BOTTOM, TropScalar, to_fraction, trop

MAX_CASORATI = 9


def make_matrix(rows: Sequence[Sequence]) -> tuple:
    m = tuple(tuple(trop(v) for v in row) for row in rows)
    k = len(m)
    if k == 0 or any(len(row) != k for row in m):
        raise ValidationError("matrix must be square and nonempty")
    return m


def is_regular(A) -> bool:
    A = make_matrix(A)
    return all(any(not v.is_bottom for v in row) for row in A)


def trop_det_brute(A) -> TropScalar:
    """Max over all permutations of the sum of selected entries."""
    A = make_matrix(A)
    k = len(A)
    den = 1
    for row in A:
        for v in row:
            if not v.is_bottom:
                den = den * v.value.denominator // _gcd(den, v.value.denominator)
    # integer arithmetic keeps the enumeration fast
    grid = [[None if v.is_bottom else int(v.value * den) for v in row] for row in A]
    best = None
    for perm in permutations(range(k)):
        total = 0
        for i, j in enumerate(perm):
            e = grid[i][j]
            if e is None:
                break
            total += e
        else:
            if best is None or total > best:
                best = total
    return BOTTOM if best is None else TropScalar(Fraction(best, den))


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _hungarian_min(cost: list[list[Fraction]]) -> list[int]:
    """Row -> column assignment minimizing total cost (shortest augmenting
    paths with potentials, O(k^3)), exact over Fractions."""
    n = len(cost)
    inf = float("inf")
    u = [Fraction(0)] * (n + 1)
    v = [Fraction(0)] * (n + 1)
    p = [0] * (n + 1)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [inf] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta, j1 = inf, -1
            for j in range(1, n + 1):
                if not used[j]:
                    cur = cost[i0 - 1][j - 1] - u[i0] - v[j]
                    if cur < minv[j]:
                        minv[j], way[j] = cur, j0
                    if minv[j] < delta:
                        delta, j1 = minv[j], j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    assign = [0] * n
    for j in range(1, n + 1):
        assign[p[j] - 1] = j - 1
    return assign


def trop_det_assignment(A) -> TropScalar:
    A = make_matrix(A)
    finite = [v.value for row in A for v in row if not v.is_bottom]
    if not finite:
        return BOTTOM
    k = len(A)
    hi, lo = max(finite), min(finite)
    # a forbidden edge costs more than any difference between feasible totals
    penalty = -lo + k * (hi - lo) + 1
    cost = [[penalty if v.is_bottom else -v.value for v in row] for row in A]
    assign = _hungarian_min(cost)
    if any(A[i][j].is_bottom for i, j in enumerate(assign)):
        return BOTTOM
    return TropScalar(sum((A[i][j].value for i, j in enumerate(assign)), Fraction(0)))


def trop_det(A, method: str = "assignment") -> TropScalar:
    if method == "brute":
        if len(A) > 8:
            raise ValidationError("brute force is limited to 8x8")
        return trop_det_brute(A)
    if method == "assignment":
        return trop_det_assignment(A)
    raise ValidationError(f"unknown method {method!r}")


# --- Casoratian -------------------------------------------------------------


def _is_bottom_fn(g) -> bool:
    return g is None or (isinstance(g, TropScalar) and g.is_bottom) or (
        isinstance(g, str) and trop(g).is_bottom
    )


def _as_pl(g):
    if isinstance(g, (FinitePL, LazyPL)):
        return g
    return constant(trop(g).value)


def casorati(fns: Sequence, c, radius, method: str = "subsets"):
    """C∘(g_0, ..., g_n)(x) = max over permutations π of Σ g_i(x + π(i)c),
    as a FinitePL on [-radius, radius]; 0∘ if any argument is 0∘.

    ``method="subsets"`` runs the dynamic program over column subsets (same
    function, fewer pl operations); ``"permutations"`` enumerates directly.
    """
    if len(fns) > MAX_CASORATI:
        raise TooManyFunctions(f"at most {MAX_CASORATI} functions, got {len(fns)}")
    if not fns:
        raise ValidationError("need at least one function")
    c, radius = to_fraction(c), to_fraction(radius)
    if c == 0:
        raise ZeroShift("shift c must be nonzero")
    if radius <= 0:
        raise ValidationError("window must be positive")
    if any(_is_bottom_fn(g) for g in fns):
        return BOTTOM
    n = len(fns) - 1
    reach = radius + n * abs(c) + 1
    base = [window(_as_pl(g), reach) for g in fns]
    shifted = [[pl_shift(g, k * c) for k in range(n + 1)] for g in base]
    if method == "permutations":
        terms = [
            pl_combine([(1, shifted[i][k]) for i, k in enumerate(perm)])
            for perm in permutations(range(n + 1))
        ]
        out = pl_max(terms)
    elif method == "subsets":
        layer = {0: constant(0)}
        for i in range(n + 1):
            nxt: dict[int, list] = {}
            for mask, acc in layer.items():
                for k in range(n + 1):
                    if not mask >> k & 1:
                        nxt.setdefault(mask | 1 << k, []).append(
                            pl_combine([(1, acc), (1, shifted[i][k])]))
            layer = {m: pl_max(v) for m, v in nxt.items()}
        out = layer[(1 << (n + 1)) - 1]
    else:
        raise ValidationError(f"unknown method {method!r}")
    return restrict(out, -radius, radius)


def casorati_at(fns: Sequence, c, x) -> TropScalar:
    """C∘ at one point: the tropical determinant of [g_i(x + k c)]."""
    c, x = to_fraction(c), to_fraction(x)
    if c == 0:
        raise ZeroShift("shift c must be nonzero")
    if any(_is_bottom_fn(g) for g in fns):
        return BOTTOM
    n = len(fns) - 1
    rows = []
    for g in fns:
        g = _as_pl(g)
        rows.append([eval_at(window(g, abs(x) + n * abs(c) + 1), x + k * c) for k in range(n + 1)])
    return trop_det_assignment(rows)


# --- Gondran-Minoux dependence -----------------------------------------------


@dataclass(frozen=True)
class Witness:
    I: tuple
    J: tuple
    alpha: tuple  # TropScalar per family member


def make_witness(I: Sequence[int], J: Sequence[int], alpha: Sequence, size: Optional[int] = None) -> Witness:
    I, J = tuple(sorted(set(I))), tuple(sorted(set(J)))
    alpha = tuple(trop(a) for a in alpha)
    size = len(alpha) if size is None else size
    if len(alpha) != size:
        raise MalformedWitness(f"expected {size} coefficients, got {len(alpha)}")
    if set(I) & set(J):
        raise MalformedWitness("I and J must be disjoint")
    if set(I) | set(J) != set(range(size)):
        raise MalformedWitness("I and J must cover every index")
    if not I or not J:
        raise MalformedWitness("I and J must both be nonempty")
    if all(a.is_bottom for a in alpha):
        raise MalformedWitness("at least one coefficient must be finite")
    return Witness(I, J, alpha)


def _side(family, idx, alpha):
    terms = [pl_combine([(1, family[i])], alpha[i].value) for i in idx if not alpha[i].is_bottom]
    return pl_max(terms) if terms else None


def gm_verify(family: Sequence, witness: Witness, radius=None) -> bool:
    """Exact check of ⊕_I α_i⊗f_i = ⊕_J α_j⊗f_j.

    FinitePL families are compared on the whole line (canonical forms);
    lazy members are compared on ``[-radius, radius]``.
    """
    w = make_witness(witness.I, witness.J, witness.alpha, len(family))
    lhs, rhs = _side(family, w.I, w.alpha), _side(family, w.J, w.alpha)
    if lhs is None or rhs is None:
        return lhs is None and rhs is None
    if isinstance(lhs, FinitePL) and isinstance(rhs, FinitePL):
        return pl_equal(lhs, rhs)
    if radius is None:
        raise ValidationError("lazy families need a comparison window")
    radius = to_fraction(radius)
    return pl_equal(restrict(window(lhs, radius), -radius, radius),
                    restrict(window(rhs, radius), -radius, radius))


def _sample_points(family: Sequence[FinitePL]) -> list[Fraction]:
    xs = sorted({x for f in family for x in f.xs})
    if not xs:
        return [Fraction(-1), Fraction(0), Fraction(1)]
    span = xs[-1] - xs[0] + 1
    pts = set(xs)
    pts.update((a + b) / 2 for a, b in zip(xs, xs[1:]))
    pts.update({xs[0] - 1, xs[0] - 10 * span, xs[-1] + 1, xs[-1] + 10 * span})
    return sorted(pts)


def _alternate(A, B, max_iter):
    """Alternating residuation for max_i(x_i + A[p][i]) = max_j(y_j + B[p][j])."""
    x = [Fraction(0)] * len(A[0])
    for _ in range(max_iter):
        ax = [max(xi + a for xi, a in zip(x, row)) for row in A]
        y = [min(ax[p] - B[p][j] for p in range(len(B))) for j in range(len(B[0]))]
        by = [max(yj + b for yj, b in zip(y, row)) for row in B]
        nx = [min(by[p] - A[p][i] for p in range(len(A))) for i in range(len(x))]
        if nx == x:
            return x, y
        x = nx
    return None


def gm_search(family: Sequence[FinitePL], max_iter: int = 200) -> Optional[Witness]:
    """Look for a Gondran-Minoux dependence; ``None`` means unknown.

    Every assignment of members to the left side, the right side, or
    "coefficient 0∘" is tried. Coefficients come from alternating
    residuation on sample points and every candidate is verified exactly,
    so a returned witness is always valid.
    """
    fam = list(family)
    if any(not isinstance(f, FinitePL) for f in fam):
        raise ValidationError("gm_search works on FinitePL families")
    size = len(fam)
    pts = _sample_points(fam)
    vals = [[eval_at(f, p) for f in fam] for p in pts]
    for labels in product((0, 1, 2), repeat=size):
        left = [i for i, t in enumerate(labels) if t == 1]
        right = [i for i, t in enumerate(labels) if t == 2]
        if not left or not right or left[0] > right[0]:
            continue
        A = [[row[i] for i in left] for row in vals]
        B = [[row[j] for j in right] for row in vals]
        sol = _alternate(A, B, max_iter)
        if sol is None:
            continue
        alpha = [BOTTOM] * size
        for i, v in zip(left, sol[0]):
            alpha[i] = TropScalar(v)
        for j, v in zip(right, sol[1]):
            alpha[j] = TropScalar(v)
        J = tuple(right)
        I = tuple(i for i in range(size) if i not in J)
        w = Witness(I, J, tuple(alpha))
        if gm_verify(fam, w):
            return w
    return None


# --- shortest length and degeneracy -----------------------------------------


@dataclass(frozen=True)
class Combo:
    basis: tuple
    coeffs: tuple

    def value(self) -> FinitePL:
        terms = [pl_combine([(1, g)], a.value) for g, a in zip(self.basis, self.coeffs)
                 if not a.is_bottom]
        if not terms:
            raise AllBottom("every coefficient is 0∘")
        return pl_max(terms)


def make_combo(basis: Sequence[FinitePL], coeffs: Sequence) -> Combo:
    if len(basis) != len(coeffs):
        raise ValidationError("basis and coefficients differ in length")
    return Combo(tuple(basis), tuple(trop(a) for a in coeffs))


def shortest_length(combo: Combo) -> int:
    """Fewest basis members whose tropical combination (any coefficients)
    equals the function.

    For a subset S the largest usable coefficient of g_k is
    inf(f - g_k); S works iff those coefficients reproduce f.
    """
    f = combo.value()
    usable = []
    for k, g in enumerate(combo.basis):
        b = infimum(pl_combine([(1, f), (-1, g)]))
        if b is not None:
            usable.append(pl_combine([(1, g)], b))
    for size in range(1, len(usable) + 1):
        for subset in combinations(usable, size):
            if pl_equal(pl_max(list(subset)), f):
                return size
    raise AssertionError("the full residuated combination must reproduce f")


def degree_of_degeneracy(combos: Sequence[Combo]) -> int:
    if not combos:
        return 0
    size = len(combos[0].basis)
    if any(c.basis != combos[0].basis for c in combos):
        raise ValidationError("combinations must share a basis")
    return sum(1 for c in combos if shortest_length(c) < size)


def monomials(n: int, d: int) -> list[tuple[int, ...]]:
    """Exponent vectors of length n+1 with sum d, in descending lexicographic order."""
    if n < 1 or d < 1:
        raise ValidationError("need n >= 1 and d >= 1")

    def rec(k, rest):
        if k == 0:
            yield (rest,)
            return
        for first in range(rest, -1, -1):
            for tail in rec(k - 1, rest - first):
                yield (first, *tail)

    return list(rec(n, d))


def monomial_count(n: int, d: int) -> int:
    """M + 1 = binomial(n + d, d)."""
    return comb(n + d, d)
