import math
from fractions import Fraction as Q

import pytest
from hypothesis import given, strategies as st

from metreg.extnum import INF, add, display, ext, inf_over, is_inf, rational, scale, sup_over, to_str

fractions = st.fractions(min_value=0, max_denominator=1000)
ext_reals = st.one_of(fractions, st.just(INF))


@pytest.mark.parametrize("raw, want", [
    (3, Q(3)), ("1/3", Q(1, 3)), (" 2/4 ", Q(1, 2)), ("inf", INF), ("Infinity", INF), (math.inf, INF),
    (Q(5, 7), Q(5, 7)),
])
def test_ext_accepts_exact_inputs(raw, want):
    assert ext(raw) == want


@pytest.mark.parametrize("raw, exc", [(0.5, TypeError), (True, TypeError), (-1, ValueError),
                                      ("-1/2", ValueError), (None, TypeError)])
def test_ext_rejects_inexact_or_negative(raw, exc):
    with pytest.raises(exc):
        ext(raw)


def test_rational_allows_negative_coordinates():
    assert rational("-3/4") == Q(-3, 4)
    with pytest.raises(TypeError):
        rational(0.25)


def test_empty_conventions():
    assert inf_over([]) == INF
    assert sup_over([]) == 0


def test_zero_times_infinity_is_one():
    assert scale(0, INF) == 1
    assert scale(INF, 0) == 1
    assert scale(2, INF) == INF
    assert scale(Q(1, 2), Q(4)) == 2


def test_add_absorbs_infinity():
    assert add(Q(1), INF) == INF
    assert add(Q(1, 3), Q(2, 3)) == 1


def test_inf_compares_exactly_with_fractions():
    assert Q(10**30) < INF
    assert is_inf(INF) and not is_inf(Q(10**30))


def test_string_forms():
    assert to_str(Q(6, 4)) == "3/2"
    assert to_str(Q(4, 2)) == "2"
    assert to_str(INF) == "inf"
    assert display(Q(1, 3)) == "0.333333"


@given(ext_reals)
def test_to_str_round_trips(x):
    assert ext(to_str(x)) == x


@given(st.lists(ext_reals, min_size=1))
def test_inf_and_sup_are_min_and_max(values):
    assert inf_over(values) == min(values)
    assert sup_over(values) == max(values)


@given(fractions, ext_reals)
def test_scale_is_monotone_in_the_constant(c, x):
    assert scale(c, x) <= scale(c + 1, x)
