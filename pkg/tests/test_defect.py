from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gen import pl_functions, small_q
from tropnev import constructions as cons
from tropnev import defect as dfc
from tropnev import nevanlinna as nv
from tropnev.errors import DegenerateCharacteristic, NoPolesInWindow, ValidationError
from tropnev.plfun import affine, constant

weights = st.builds(F, st.integers(1, 20), st.integers(1, 6))


@given(weights, weights)
def test_two_peak_middle_range_is_alpha_share(alpha, beta):
    """Target in [1, 2) absorbs the lower peak at 1/α, which carries weight α."""
    f = cons.two_peak(alpha, beta)
    assert dfc.defect_exact(f, F(3, 2)) == alpha / (alpha + beta)
    assert dfc.defect_exact(f, F(1, 2)) == 0
    assert dfc.defect_exact(f, 2) == 1


@given(weights, weights, st.sampled_from([F(0), F(1, 2), F(1), F(3, 2), F(2), F(3)]))
def test_both_defect_forms_agree(alpha, beta, a):
    f = cons.two_peak(alpha, beta)
    assert dfc.defect_exact(f, a) == dfc.defect_by_roots(f, a)


def test_cli_reference_value():
    assert dfc.defect_exact(cons.two_peak(F(2, 5), 1), F(3, 2)) == F(2, 7)


@given(pl_functions(max_nodes=6, jumps=False), small_q, small_q)
def test_defect_is_monotone_in_the_target(f, a, b):
    a, b = min(a, b), max(a, b)
    try:
        da, db = dfc.defect_exact(f, a), dfc.defect_exact(f, b)
    except DegenerateCharacteristic:
        return
    assert 0 <= da <= db <= 1


def test_profile_plateaus():
    f = cons.two_peak(1, 1)
    prof = dfc.defect_profile(f, [F(k, 2) for k in range(0, 7)])
    assert prof.monotone
    assert [p[2] for p in prof.plateaus] == [0, F(1, 2), 1]
    assert prof.plateaus[1][:2] == (1, F(3, 2))


def test_empirical_needs_schedule():
    with pytest.raises(ValidationError):
        dfc.defect(cons.ruler(), 1)
    with pytest.raises(ValidationError):
        dfc.defect_empirical(cons.ruler(), 1, [1, 2, 3])


def test_empirical_ruler_estimate():
    est = dfc.defect(cons.ruler(), F(3, 2), nv.geometric_schedule(50, 2, 8))
    assert not est.exact
    assert abs(float(est.value) - 0.5) < 0.02
    assert est.lo <= est.hi


def test_unintegrated_ratio():
    assert dfc.unintegrated_ratio(cons.two_peak(1, 1), F(3, 2), 10) == F(1, 2)
    with pytest.raises(NoPolesInWindow):
        dfc.unintegrated_ratio(affine(1, 0), 0, 5)


def test_constant_has_no_defect_information():
    assert dfc.defect_exact(constant(1), 0) == 0
