import threading
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gen import pl_functions, small_q
from tropnev.errors import MissingAnchor, NotPiecewiseLinear, UnsortedNodes, ValidationError
from tropnev.plfun import (
    LEFT,
    RIGHT,
    LazyPL,
    Node,
    affine,
    constant,
    corners,
    eval_at,
    from_points,
    infimum,
    jump_sign,
    jumps,
    make_finite_pl,
    negate,
    one_sided_limits,
    pl_combine,
    pl_max,
    pl_min,
    pl_shift,
    restrict,
    tent,
)

probe_points = st.lists(small_q, min_size=1, max_size=10)


@given(pl_functions())
def test_canonical_form_is_a_fixed_point(f):
    assert make_finite_pl(f.left_slope, f.nodes, f.right_slope, f.anchor) == f


def test_redundant_nodes_are_dropped():
    f = make_finite_pl(1, [(0, 0, 0), (1, 1, 1, RIGHT), (2, 2, 2)], 1)
    assert f == affine(1, 0)
    assert f.anchor == (0, 0)


@given(pl_functions(side=RIGHT), pl_functions(side=RIGHT), small_q, probe_points)
def test_combine_is_pointwise(f, g, c, xs):
    h = pl_combine([(2, f), (F(-1, 3), g)], c)
    for x in xs + list(f.xs):
        assert eval_at(h, x) == 2 * eval_at(f, x) - eval_at(g, x) / 3 + c


@given(pl_functions(side=LEFT), pl_functions(side=LEFT), pl_functions(side=LEFT), probe_points)
def test_max_is_pointwise(f, g, k, xs):
    h = pl_max([f, g, k])
    for x in xs + list(f.xs) + list(g.xs):
        assert eval_at(h, x) == max(eval_at(f, x), eval_at(g, x), eval_at(k, x))
        lo, hi = one_sided_limits(h, x)
        assert lo == max(one_sided_limits(f, x)[0], one_sided_limits(g, x)[0], one_sided_limits(k, x)[0])
        assert hi == max(one_sided_limits(f, x)[1], one_sided_limits(g, x)[1], one_sided_limits(k, x)[1])


@given(pl_functions(jumps=False), pl_functions(jumps=False), probe_points)
def test_min_is_pointwise(f, g, xs):
    h = pl_min([f, g])
    for x in xs:
        assert eval_at(h, x) == min(eval_at(f, x), eval_at(g, x))


def test_opposite_sided_jumps_cannot_be_maxed():
    f = make_finite_pl(0, [(0, 0, 2, LEFT)], 0)
    g = make_finite_pl(0, [(0, 1, -1, RIGHT)], 0)
    with pytest.raises(NotPiecewiseLinear):
        pl_max([f, g])


@given(pl_functions(), small_q, probe_points)
def test_shift(f, c, xs):
    g = pl_shift(f, c)
    for x in xs:
        assert eval_at(g, x) == eval_at(f, x + c)


@given(pl_functions())
def test_negate_is_an_involution(f):
    assert negate(negate(f)) == f


@given(pl_functions(), small_q, st.builds(F, st.integers(1, 30), st.sampled_from([1, 2, 3])),
       probe_points)
def test_restrict_agrees_on_the_window(f, lo, width, xs):
    hi = lo + width
    g = restrict(f, lo, hi)
    for x in xs + [lo, hi] + [x for x in f.xs if lo <= x <= hi]:
        if lo <= x <= hi:
            assert eval_at(g, x) == eval_at(f, x)
    assert restrict(g, lo, hi) == g
    assert g.slope_at(lo, RIGHT) == f.slope_at(lo, RIGHT)


@given(pl_functions())
def test_corner_weights_telescope(f):
    total = sum((c.omega for c in corners(f)), F(0))
    assert total == f.right_slope - f.left_slope


def test_corners_and_jumps_of_a_tent():
    f = tent(1, 2, 3)
    (c,) = corners(f)
    assert (c.x, c.omega, c.kind) == (1, -4, "pole")
    assert jumps(f) == []
    assert eval_at(f, 0) == 1


def test_jump_sign():
    assert jump_sign(Node(F(2), F(0), F(1), LEFT)) == "positive"
    assert jump_sign(Node(F(-2), F(0), F(1), LEFT)) == "negative"
    assert jump_sign(Node(F(0), F(0), F(1), RIGHT)) == "positive"
    assert jump_sign(Node(F(0), F(0), F(1), LEFT)) == "negative"


def test_validation():
    with pytest.raises(UnsortedNodes):
        make_finite_pl(0, [(1, 0, 0), (0, 0, 0)], 0)
    with pytest.raises(MissingAnchor):
        make_finite_pl(0, [], 0)
    with pytest.raises(ValidationError):
        make_finite_pl(0, [(0, 0, 1, "up")], 0)
    with pytest.raises(ValidationError):
        make_finite_pl(0, [], 1, (0, 0))


def test_from_points_and_infimum():
    f = from_points([(0, 0), (1, 3), (2, 1)], 1, -1)
    assert eval_at(f, F(3, 2)) == 2
    assert infimum(f) is None
    assert infimum(make_finite_pl(-1, [(0, 2, -1, RIGHT)], 1)) == -1
    assert infimum(constant(4)) == 4


def _staircase(r):
    nodes = [(k, k, k + 1, RIGHT) for k in range(-int(r) - 1, int(r) + 2)]
    return make_finite_pl(0, nodes, 0)


def test_lazy_windows_nest():
    calls = []

    def gen(r):
        calls.append(r)
        return _staircase(r)

    f = LazyPL(gen, name="stairs")
    big = f.materialize(10)
    small = f.materialize(3)
    assert restrict(big, -3, 3) == small
    assert calls == [10]  # the wide window is reused
    assert f(F(5, 2)) == 3


def test_lazy_materialize_is_thread_safe():
    f = LazyPL(_staircase, name="stairs")
    out = []
    threads = [threading.Thread(target=lambda r=r: out.append((r, f.materialize(r))))
               for r in [5, 7, 5, 9, 7, 5] * 3]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    by_r: dict = {}
    for r, w in out:
        by_r.setdefault(r, set()).add(w)
    assert all(len(v) == 1 for v in by_r.values())


def test_lazy_arithmetic_lifts():
    f = LazyPL(_staircase, name="stairs")
    g = pl_combine([(2, f)], 1)
    assert isinstance(g, LazyPL)
    assert g(F(7, 2)) == 2 * 4 + 1
    h = pl_max([f, constant(0)])
    assert h(F(-5, 2)) == 0


@given(pl_functions(), st.lists(small_q, max_size=5))
def test_splitting_pieces_keeps_the_canonical_form(f, extra):
    """Inserting continuous nodes on existing pieces does not change f."""
    xs = sorted(set(extra) - set(f.xs))
    nodes = list(f.nodes)
    for x in xs:
        v = eval_at(f, x)
        nodes.append(Node(x, v, v, LEFT))
    nodes.sort(key=lambda n: n.x)
    if nodes:
        assert make_finite_pl(f.left_slope, nodes, f.right_slope) == f
