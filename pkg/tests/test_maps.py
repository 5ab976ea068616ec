from fractions import Fraction as Q

import pytest
from hypothesis import given, strategies as st

import oracles
from metreg import ExplicitSpace, LinearSpace, SetValuedMap, SingleValuedMap, gallery
from metreg.maps import add_single, inverse, minkowski_sum, restrict, value
from metreg.spaces import Ball

X = LinearSpace(1)
small = st.integers(-4, 4).map(Q)
graphs = st.sets(st.tuples(small, small), max_size=12)


def test_two_lines_fibers():
    F = gallery.two_lines(Q(1, 4), Q(1, 4), Q(1, 20))["F"]
    assert value(F, Q(1, 5)) == {Q(1, 5), Q(-1)}
    assert value(F, Q(7)) == frozenset()
    assert inverse(F)(Q(-1)) == F.dom


def test_sum_failure_fiber_collapses_duplicates():
    H = gallery.sum_failure(5, Q(1, 10))["H"]
    assert H(Q(0)) == {Q(0), Q(-1), Q(1)}
    assert H(Q(1, 2)) == {Q(1, 2), Q(-1), Q(3, 2), Q(0)}


def test_inverse_of_empty_and_identity():
    E = SetValuedMap(X, X, [])
    assert inverse(E).graph == frozenset()
    Id = SetValuedMap(X, X, [(Q(k), Q(k)) for k in range(3)])
    assert inverse(Id).graph == Id.graph


@given(graphs)
def test_inverse_is_an_involution(graph):
    F = SetValuedMap(X, X, graph)
    assert inverse(inverse(F)) == F


@given(graphs, graphs)
def test_minkowski_sum_matches_oracle(gf, gg):
    F, G = SetValuedMap(X, X, gf), SetValuedMap(X, X, gg)
    assert minkowski_sum(F, G).graph == oracles.minkowski(gf, gg)
    assert (F + G).graph == minkowski_sum(G, F).graph


@given(graphs)
def test_add_single_shifts_every_fiber(graph):
    F = SetValuedMap(X, X, graph)
    g = SingleValuedMap(X, X, {x: 2 * x for x in F.dom})
    H = add_single(F, g)
    for x in F.dom:
        assert H(x) == {v + 2 * x for v in F(x)}
    assert (F + g).graph == H.graph


def test_sums_need_a_linear_target():
    E = ExplicitSpace(["a"], [[0]])
    F = SetValuedMap(X, E, [(Q(0), "a")])
    with pytest.raises(TypeError):
        minkowski_sum(F, F)


def test_add_single_undefined_point():
    F = SetValuedMap(X, X, [(Q(0), Q(0)), (Q(1), Q(1))])
    g = SingleValuedMap(X, X, {Q(0): Q(0)})
    with pytest.raises(ValueError, match="undefined"):
        add_single(F, g)


def test_restrict_with_balls_and_sets():
    F = SetValuedMap(X, X, [(Q(k), Q(j)) for k in range(-2, 3) for j in range(-2, 3)])
    R = restrict(F, Ball(X, Q(0), 1, closed=True), {Q(2)})
    assert R.graph == {(Q(-1), Q(2)), (Q(0), Q(2)), (Q(1), Q(2))}


def test_single_valued_as_graph():
    g = SingleValuedMap.from_function(X, X, [Q(0), Q(1)], lambda x: x + 1)
    assert g.as_set_valued().graph == {(Q(0), Q(1)), (Q(1), Q(2))}
