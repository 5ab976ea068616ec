from fractions import Fraction as Q

import pytest
from hypothesis import given, settings, strategies as st

from metreg import Ball, ExplicitSpace, LinearSpace, validate_metric
from metreg.extnum import INF
from metreg.gallery import random_space
from metreg.spaces import ball, diameter, dist_point_set, omega, sorted_points, xi

coords = st.fractions(min_value=-10, max_value=10, max_denominator=12)


def test_explicit_space_distances():
    S = ExplicitSpace(["a", "b", "c"], [[0, 1, 2], [1, 0, "3/2"], [2, "3/2", 0]])
    assert S.d("b", "c") == Q(3, 2)
    assert validate_metric(S)


@pytest.mark.parametrize("points, dist", [
    (["a", "a"], [[0, 1], [1, 0]]),
    (["a", "b"], [[0, 1]]),
    (["a", "b"], [[0, "inf"], ["inf", 0]]),
])
def test_explicit_space_rejects_bad_input(points, dist):
    with pytest.raises(ValueError):
        ExplicitSpace(points, dist)


def test_unknown_point_id():
    S = ExplicitSpace(["a"], [[0]])
    with pytest.raises(ValueError, match="unknown point"):
        S.d("a", "z")


def test_triangle_violation_is_reported_with_points():
    S = ExplicitSpace(["a", "b", "c"], [[0, 1, 5], [1, 0, 1], [5, 1, 0]])
    v = validate_metric(S)
    assert not v
    assert v.witness["axiom"] == "triangle"
    assert v.lhs > v.rhs


def test_symmetry_violation():
    S = ExplicitSpace(["a", "b"], [[0, 1], [2, 0]])
    assert validate_metric(S).witness["axiom"] == "symmetry"


def test_linear_norms():
    l1 = LinearSpace(2, "l1")
    linf = LinearSpace(2, "linf")
    p, q = (Q(0), Q(0)), (Q(1), Q(-2))
    assert l1.d(p, q) == 3
    assert linf.d(p, q) == 2
    with pytest.raises(ValueError):
        LinearSpace(2, "l2")
    with pytest.raises(ValueError):
        l1.coerce((1, 2, 3))


def test_product_metrics():
    X = LinearSpace(1)
    p, q = (Q(0), Q(0)), (Q(1), Q(3))
    assert xi(X, X, Q(1, 2)).d(p, q) == Q(3, 2)
    assert omega(X, X, 2).d(p, q) == 7
    with pytest.raises(ValueError):
        xi(X, X, 0)


def test_balls_open_closed_and_infinite():
    X = LinearSpace(1, sample=[-1, 0, 1, 2])
    assert ball(X, Q(0), 1) == (Q(0),)
    assert ball(X, Q(0), 1, closed=True) == (Q(-1), Q(0), Q(1))
    assert Q(10**9) in Ball(X, Q(0), INF)


def test_distance_to_empty_set_is_infinite():
    assert dist_point_set(LinearSpace(1), Q(0), []) == INF


def test_diameter():
    X = LinearSpace(1)
    assert diameter(X, [Q(0), Q(-1), Q(1)]) == 2
    assert diameter(X, [Q(5)]) == 0


def test_sorted_points_is_total_on_mixed_types():
    assert sorted_points(["b", Q(1), (Q(0), Q(1)), Q(-1)]) == [Q(-1), Q(1), (Q(0), Q(1)), "b"]


@given(st.lists(st.tuples(coords, coords), min_size=1, max_size=6, unique=True), st.sampled_from(["l1", "linf"]))
def test_linear_space_satisfies_metric_axioms(pts, norm):
    assert validate_metric(LinearSpace(2, norm, sample=pts))


@settings(max_examples=30)
@given(st.integers(0, 10**6), st.integers(1, 12))
def test_random_spaces_are_metric(seed, n):
    import random
    assert validate_metric(random_space(random.Random(seed), n))
