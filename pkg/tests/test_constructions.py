import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gen import rand_pl, small_q
from tropnev import constructions as cons
from tropnev.errors import BadParams, NotPiecewiseLinear
from tropnev.plfun import (LEFT, RIGHT, affine, constant, eval_at, is_continuous, make_finite_pl,
                           pl_equal, restrict)


def convex(f):
    return is_continuous(f) and all(f.slope_at(x, LEFT) <= f.slope_at(x, RIGHT) for x in f.xs)


def test_ruler_recursion():
    rd = cons.ruler_data()
    for n in range(1, 300):
        assert rd.a(2 * n) == rd.a(n) + 1
        assert rd.a(2 * n - 1) == 1
    assert rd.partial_sum(4) == 1 + 2 + 1 + 3


def test_ruler_function_hits_tent_peaks():
    rd = cons.ruler_data()
    f = cons.ruler().materialize(100)
    for n in range(1, 20):
        assert eval_at(f, rd.b(n)) == rd.a(n)


@settings(max_examples=40)
@given(st.sampled_from([F(2), F(3), F(-2), F(5, 2), F(1, 2), F(-1, 3), F(2, 3)]), small_q)
def test_hyperexp_functional_equation(alpha, x):
    assert cons.hyperexp_value(alpha, x + 1) == alpha * cons.hyperexp_value(alpha, x)


def test_hyperexp_branches_on_unit_interval():
    for x in (F(0), F(1, 3), F(9, 10)):
        assert cons.hyperexp_value(3, x) == x + F(1, 2)
        assert cons.hyperexp_value(F(1, 2), x) == 2 - x


def test_hyperexp_is_continuous_and_entire_when_alpha_large():
    f = cons.hyperexp(3).materialize(6)
    assert is_continuous(f)
    assert convex(f)
    for x in (F(-4), F(-1, 2), F(0), F(7, 3), F(5)):
        assert eval_at(f, x) == cons.hyperexp_value(3, x)


@pytest.mark.parametrize("alpha", [0, 1, -1])
def test_hyperexp_rejects_degenerate_alpha(alpha):
    with pytest.raises(BadParams):
        cons.hyperexp(alpha)


def test_oscillating_pair():
    f, g = cons.oscillating_pair(2)
    fw, gw = f.materialize(40), g.materialize(40)
    for k in range(0, 40):
        assert eval_at(gw, k) >= eval_at(fw, k)
        ratio = eval_at(fw, k) / eval_at(gw, k)
        assert ratio == (1 if k % 2 == 0 else F(1, 2))
    assert convex(restrict(fw, 0, 39))
    with pytest.raises(BadParams):
        cons.oscillating_pair(1)


def test_distribution_requires_a_cdf():
    with pytest.raises(BadParams):
        cons.distribution(affine(2, 0))
    with pytest.raises(BadParams):
        cons.distribution(make_finite_pl(0, [(0, 0, 0), (F(1, 2), 1, 1), (1, 0, 1, RIGHT)], 0))


def test_distribution_terms_follow_the_quantile():
    cdf = make_finite_pl(0, [(0, 0, 0), (1, 1, 1)], 0)
    seq = cons.distribution_sequence(cdf)
    for n in range(1, 40):
        assert seq.a(n) == cons.van_der_corput(n)
    assert [cons.van_der_corput(n) for n in (1, 2, 3)] == [F(1, 2), F(1, 4), F(3, 4)]
    assert cons.generalized_inverse(make_finite_pl(0, [(0, 0, 0), (F(1, 2), 0, 1, RIGHT), (1, 1, 1)], 0),
                                    F(1, 3)) == F(1, 2)


def test_two_peak_and_jump_counterexample():
    with pytest.raises(BadParams):
        cons.two_peak(0, 1)
    rep = cons.jump_counterexample_report(3)
    assert [rep[k] for k in ("J_f", "J_g", "J_fg")] == [F(1, 2), F(1, 4), F(3, 4)]
    with pytest.raises(BadParams):
        cons.jump_counterexample_report(2)


def test_griffiths_demo():
    rep = cons.griffiths_demo(3, 1, 1)
    assert rep["M"] == 1 and rep["lambda"] == 2
    assert rep["defect_sum"] == 4 and rep["bound"] == 4
    assert not rep["violated"]
    with pytest.raises(BadParams):
        cons.griffiths_demo(1, 1, 1)


def test_growth_condition_demo():
    rep = cons.growth_condition_demo(5)
    assert rep["casorati_is_3e2"] and rep["N_equals_T"]


def test_construct_dispatch():
    assert pl_equal(cons.construct("example_pj"), cons.example_pj())
    assert pl_equal(cons.construct("two_peak", alpha=F(2, 5), beta=1, unused=3),
                    cons.two_peak(F(2, 5), 1))
    with pytest.raises(BadParams):
        cons.construct("nope")
    with pytest.raises(BadParams):
        cons.construct("two_peak", alpha=1)


def test_ultradiscrete_fixed_point():
    # y(x+1) + y(x-1) = 2 y(x) has every constant as a solution
    R = cons.make_two_var([(0, 0, 2)])
    y = cons.ultradiscrete_extend(R, constant(F(3, 2)), 4)
    assert pl_equal(y, restrict(constant(F(3, 2)), -4, 6))


def test_ultradiscrete_satisfies_the_recursion():
    rng = random.Random(11)
    R = cons.make_two_var([(0, 0, 1), (1, F(1, 2), 0)], [(0, 0, 0), (-1, 0, -1)])
    for _ in range(5):
        init = rand_pl(rng, max_nodes=4, side=RIGHT)
        y = cons.ultradiscrete_extend(R, init, 3)
        for _ in range(40):
            x = F(rng.randint(-200, 400), 100)
            assert eval_at(y, x + 1) + eval_at(y, x - 1) == R(x, eval_at(y, x))


def test_splice_rejects_isolated_values():
    spike = make_finite_pl(0, [(1, 0, 0)], 0)
    f = make_finite_pl(0, [(1, 5, 5)], 0)
    with pytest.raises(NotPiecewiseLinear):
        cons.splice([(0, 1, spike), (1, 2, make_finite_pl(0, [(1, 1, 2, LEFT)], 0))])
    assert eval_at(cons.splice([(0, 1, spike), (1, 2, f)]), 1) == 5
