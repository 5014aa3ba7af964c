import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gen import pl_functions, small_q
from tropnev import constructions as cons
from tropnev import nevanlinna as nv
from tropnev.errors import ValidationError, XOutOfRange
from tropnev.plfun import LEFT, RIGHT, constant, make_finite_pl, negate, tent

radii = st.builds(F, st.integers(1, 60), st.sampled_from([1, 2, 3, 4]))


@settings(max_examples=150)
@given(pl_functions(max_nodes=10), radii, st.data())
def test_corrected_poisson_jensen_reproduces_f(f, r, data):
    inside = [x for x in f.xs if -r < x < r] + [F(0)]
    x = data.draw(st.sampled_from(inside) | st.builds(lambda t: r * t, st.builds(
        F, st.integers(-99, 99), st.just(100))))
    rep = nv.poisson_jensen(f, r, x)
    assert rep.residual == 0


@given(pl_functions(jumps=False), radii)
def test_modes_agree_on_continuous_functions(f, r):
    a, b = nv.jensen(f, r, nv.CORRECTED), nv.jensen(f, r, nv.LITERAL)
    assert a.residual == b.residual == 0


@given(pl_functions(max_nodes=6), radii)
def test_jensen_functional_identity(f, r):
    assert nv.jensen(f, r).checks["functional_residual"] == 0


def test_example_values_and_terms():
    f = cons.example_pj()
    rep = nv.poisson_jensen(f, 4, 0)
    assert rep.terms["boundary_average"] == F(1, 2)
    assert rep.terms["root_sum"] == F(-9, 2)
    assert rep.terms["pole_sum"] == 7
    assert rep.value_reconstructed == 1


def test_literal_values_are_frozen():
    f = cons.example_pj()
    at0 = nv.poisson_jensen(f, 4, 0, nv.LITERAL)
    at_half = nv.poisson_jensen(f, 4, F(-1, 2), nv.LITERAL)
    assert (at0.value_reconstructed, at0.residual) == (2, 1)
    assert (at_half.value_reconstructed, at_half.residual) == (0, -1)
    assert {"A_f", "B_f", "AB_term", "origin_term", "jump_tilt"} <= set(at0.terms)


def test_x_must_be_inside():
    with pytest.raises(XOutOfRange):
        nv.poisson_jensen(cons.example_pj(), 4, 4)
    with pytest.raises(ValidationError):
        nv.poisson_jensen(cons.example_pj(), 4, 0, "loose")


def test_counts_of_a_tent():
    f = tent(0, 1, 1)
    assert nv.count_poles(f, 3) == (2, 3)
    s = nv.characteristic(f, 3)
    assert (s.m, s.N, s.J, s.T) == (0, 3, 0, 3)
    assert nv.proximity(f, F(1, 2)) == F(1, 2)
    assert nv.count_roots(negate(f), 3) == (2, 3)


def test_jump_edge_rule():
    down = lambda side: make_finite_pl(0, [(2, 1, 0, side)], 0)  # noqa: E731
    assert nv.jump_count(down(RIGHT), 2) == F(1, 2)
    assert nv.jump_count(down(LEFT), 2) == 0
    assert nv.jump_count(down(LEFT), 3) == F(1, 2)
    up_left = lambda side: make_finite_pl(0, [(-2, 1, 0, side)], 0)  # noqa: E731
    assert nv.jump_count(up_left(LEFT), 2) == 0  # jump of -1 at x<0 is positive
    neg_left = lambda side: make_finite_pl(0, [(-2, 0, 1, side)], 0)  # noqa: E731
    assert nv.jump_count(neg_left(LEFT), 2) == F(1, 2)
    assert nv.jump_count(neg_left(RIGHT), 2) == 0


def test_origin_classification():
    f = make_finite_pl(0, [(0, 0, 1, RIGHT)], 0)
    assert nv.jump_count(f, 1, nv.LITERAL) == 0
    assert nv.jump_count(f, 1, nv.CORRECTED) == F(1, 2)


@given(pl_functions(max_nodes=6, side=LEFT), pl_functions(max_nodes=3, side=LEFT), radii)
def test_first_main_theorem_error_bound(f, a, r):
    eps = nv.fmt_epsilon(f, a, r)
    assert 0 <= eps <= nv.proximity(a, r)


@given(pl_functions(max_nodes=6, jumps=False), small_q)
def test_second_main_theorem_slope(f, a):
    assert nv.smt_residual_slope(f, a) == 0


def test_smt_terms_on_the_counterexample():
    f, a = cons.counterexample_fa()
    terms = nv.smt_terms(f, a, 10)
    assert terms["N_recip"] == 25
    assert terms["residual"] == 1


@given(pl_functions(max_nodes=5))
def test_characteristic_is_eventually_affine(f):
    prof = nv.asymptotics(f)
    t = math.floor(prof.threshold) + 1
    vals = [nv.T(f, t + k) for k in range(4)]
    assert all(b - a == prof.slope_T for a, b in zip(vals, vals[1:]))


def test_order_estimates():
    est = nv.order_estimate(tent(0, 1, 1), [F(10)])
    assert est.exact and est.rho == 1.0
    assert nv.order_estimate(constant(3), [F(10)]).rho == 0.0
    lazy = nv.order_estimate(cons.hyperexp(2), [F(10), F(100), F(1000)])
    assert not lazy.exact and 0.85 <= lazy.rho2 <= 1.0


def test_schedules():
    assert nv.parse_schedule("geometric:1,2,4") == [1, 2, 4, 8]
    assert nv.parse_schedule("linear:1,3,3") == [1, 2, 3]
    assert nv.parse_schedule("1/2,3") == [F(1, 2), 3]
    with pytest.raises(ValidationError):
        nv.parse_schedule("geometric:1,1,4")
    with pytest.raises(ValidationError):
        nv.parse_schedule("spiral:1,2,3")


def test_log_of_huge_rationals():
    q = F(2) ** 5000 / 3
    assert abs(nv.log_fraction(q) - (5000 * math.log(2) - math.log(3))) < 1e-9
