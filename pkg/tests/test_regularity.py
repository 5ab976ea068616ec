from fractions import Fraction as Q

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from metreg import (GammaFunction, LinearSpace, SetValuedMap, SingleValuedMap, Window, ball_window, check_aubin,
                    check_gamma_regular, check_milyutin, check_regular, check_restricted_regular,
                    check_semiregular, check_strong_regular, check_sum_stable, coincidence_bound, gallery,
                    hausdorff_lipschitz, lipschitz_check, regularity_modulus)
from metreg import regularity
from metreg.extnum import INF, scale
from metreg.regularity import modulus_with_witness, restricted_modulus

Y = LinearSpace(1)


def random_case(seed, n=6):
    gi = gallery.random_instance(seed, (n, 3))
    F = gi["F"]
    xs, ys = gi.X.enumerate(), gi.Y.enumerate()
    W = Window((x, y) for i, x in enumerate(xs) for j, y in enumerate(ys) if (i + 2 * j + seed) % 3)
    return gi, F, W


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 9))
def test_modulus_matches_oracle(seed, n):
    gi, F, W = random_case(seed, n)
    want = oracles.modulus(F.graph, W.pairs, gi.X.d, gi.Y.d)
    assert regularity_modulus(F, W) == want


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([Q(1, 2), Q(1), Q(3), Q(10)]))
def test_check_regular_matches_oracle(seed, kappa):
    gi, F, W = random_case(seed)
    assert check_regular(F, W, kappa).holds == oracles.regular(F.graph, W.pairs, kappa, gi.X.d, gi.Y.d)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_modulus_is_the_least_constant(seed):
    _, F, W = random_case(seed)
    mod = regularity_modulus(F, W)
    if mod == INF:
        assert not check_regular(F, W, 10**9)
        return
    if mod > 0:
        assert check_regular(F, W, mod)
        assert not check_regular(F, W, mod * Q(99, 100))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_failure_witness_recomputes(seed):
    gi, F, W = random_case(seed)
    v = check_regular(F, W, Q(1, 2))
    if v:
        return
    x, y = v.witness["x"], v.witness["y"]
    lhs = oracles.dist(x, oracles.preimage(F.graph, y), gi.X.d)
    rhs = oracles.times(Q(1, 2), oracles.dist(y, oracles.fiber(F.graph, x), gi.Y.d))
    assert (lhs, rhs) == (v.lhs, v.rhs) and lhs > rhs
    assert not check_regular(F, Window([(x, y)]), Q(1, 2))


def test_two_lines_frozen_values():
    gi = gallery.two_lines(1, Q(3, 4), Q(1, 20))
    assert regularity_modulus(gi["F"], gi.windows["W"]) == oracles.two_lines_modulus(1, Q(3, 4), Q(1, 20))
    mod, (x, y) = modulus_with_witness(gi["F"], gi.windows["W"])
    assert y == gi.expected["attaining_y"]
    assert mod >= gi.expected["modulus_lower_bound"]


def test_two_lines_grows_like_one_over_h_past_minus_one():
    mods = []
    for h in (Q(1, 10), Q(1, 20), Q(1, 40)):
        gi = gallery.two_lines(Q(3, 2), Q(3, 2), h)
        assert gi.expected["unbounded"]
        mods.append(regularity_modulus(gi["F"], gi.windows["W"]) * h)
    # y = -1 - h sits next to -1 but its only preimage is y itself
    assert mods[0] == mods[1] == mods[2] > 0


def test_kappa_must_be_positive_and_finite():
    _, F, W = random_case(1)
    for bad in (0, "inf"):
        with pytest.raises(ValueError):
            check_regular(F, W, bad)


def test_empty_window_is_vacuous():
    _, F, _ = random_case(1)
    v = check_regular(F, Window([]), 1)
    assert v and v.vacuous


def test_parallel_path_agrees(monkeypatch):
    gi = gallery.two_lines(1, Q(3, 4), Q(1, 20))
    monkeypatch.setattr(regularity, "PARALLEL_THRESHOLD", 10)
    for kappa in (Q(2), Q(10)):
        a = check_regular(gi["F"], gi.windows["W"], kappa, jobs=1)
        b = check_regular(gi["F"], gi.windows["W"], kappa, jobs=2)
        assert a.holds == b.holds
        assert (a.witness, a.lhs, a.rhs) == (b.witness, b.lhs, b.rhs)


def test_restricted_regularity_and_its_modulus():
    F = SetValuedMap(Y, Y, [(Q(0), Q(0)), (Q(0), Q(5)), (Q(1), Q(1))])
    W = Window([(Q(0), Q(1))])
    # with V = Y the far value 5 is irrelevant; restricted to V = {5} it drives the bound
    assert restricted_modulus(F, W, {Q(0), Q(5)}) == 1
    assert restricted_modulus(F, W, {Q(5)}) == Q(1, 4)
    assert check_restricted_regular(F, W, {Q(5)}, Q(1, 4))
    assert not check_restricted_regular(F, W, {Q(5)}, Q(1, 5))
    assert check_restricted_regular(F, W, set(), Q(1, 100))


def test_gamma_regularity_subwindow():
    F = SetValuedMap(Y, Y, [(Q(0), Q(0)), (Q(2), Q(3))])
    W = Window([(Q(0), Q(3)), (Q(0), Q(1, 2))])
    # dist(3, F(0)) = 3 lies beyond gamma, so only (0, 1/2) is tested
    v = check_gamma_regular(F, W, GammaFunction.const(2), 1)
    assert v.notes["subwindow"] == 1
    assert not v  # F^-1(1/2) is empty
    assert check_gamma_regular(F, Window([(Q(0), Q(3))]), GammaFunction.const(2), 1).vacuous
    vb = check_gamma_regular(F, Window([(Q(0), Q(3))]), GammaFunction.const(2), 1, "B", delta=2)
    assert vb.holds and vb.notes["subwindow"] == 1
    with pytest.raises(ValueError):
        check_gamma_regular(F, W, GammaFunction.const(2), 1, "C")


def test_gamma_must_be_positive_on_the_domain():
    F = SetValuedMap(Y, Y, [(Q(0), Q(0))])
    with pytest.raises(ValueError, match="positive"):
        check_gamma_regular(F, Window([(Q(0), Q(0))]), GammaFunction.from_table({Q(0): 0}), 1)


def test_milyutin_gauge_is_distance_to_the_complement():
    X = LinearSpace(1, sample=[Q(k) for k in range(-3, 4)])
    W = Window.product([Q(-1), Q(0), Q(1)], [Q(0)])
    vals = GammaFunction.milyutin().values(X, W, [Q(0), Q(1)])
    assert vals == {Q(0): 2, Q(1): 1}
    F = SetValuedMap(X, X, [(x, x) for x in X.enumerate()])
    assert check_milyutin(F, W, 1)


def test_semiregular():
    F = SetValuedMap(Y, Y, [(Q(0), Q(0)), (Q(2), Q(1))])
    assert check_semiregular(F, Q(0), [Q(1)], [Q(0)], 2)
    v = check_semiregular(F, Q(0), [Q(1)], [Q(0)], 1)
    assert not v and v.lhs == 2 and v.rhs == 1
    with pytest.raises(ValueError, match="subset"):
        check_semiregular(F, Q(0), [Q(1)], [Q(7)], 1)


def test_aubin_and_hausdorff_lipschitz():
    gi = gallery.sum_failure(5, Q(1, 10))
    xs = gi.X.enumerate()
    assert check_aubin(gi["G"], xs, None, Q(1, 100))
    F = gi["F"]
    v = hausdorff_lipschitz(F, xs, Q(1, 2))
    assert not v and v.property == "hausdorff-lipschitz"
    assert hausdorff_lipschitz(F, xs, 1)
    # restricting to V = {-1} leaves only the constant branch
    assert check_aubin(F, xs, {Q(-1)}, Q(1, 100))


def test_lipschitz_single_valued():
    X = LinearSpace(1, sample=range(-3, 4))
    g = SingleValuedMap.from_function(X, X, X.enumerate(), lambda x: 3 * x)
    assert lipschitz_check(g, X.enumerate(), 3)
    v = lipschitz_check(g, X.enumerate(), Q(5, 2))
    assert not v and v.lhs > v.rhs


def test_sum_stability_fails_on_the_counterexample():
    gi = gallery.sum_failure(5, Q(1, 10))
    zero = Q(0)
    v = check_sum_stable(gi["F"], gi["G"], (zero, zero, zero), [(Q(1, 2), Q(1, 2))])
    assert not v
    # v = 0 at x near 0 only splits as -1 + 1, far from (0, 0)
    assert v.witness["v"] == 0
    with pytest.raises(ValueError):
        check_sum_stable(gi["F"], gi["G"], (zero, Q(3), zero), [])


def test_sum_stability_of_a_single_valued_pair():
    gi = gallery.linear_perturbation(Q(1, 4), Q(1, 4), L=1)
    zero = Q(0)
    G = gi["g"].as_set_valued()
    assert check_sum_stable(gi["F"], G, (zero, zero, zero), [(Q(1, 2), Q(1, 2)), (1, 1)])


def test_strong_regularity_is_stronger():
    gi = gallery.two_lines(Q(1, 4), Q(1, 4), Q(1, 20))
    F, W = gi["F"], gi.windows["W"]
    for kappa in (Q(1), Q(2)):
        if check_strong_regular(F, W, kappa):
            assert check_regular(F, W, kappa)
    # F^-1(y) meets the window section at y itself, so the two notions agree here
    assert check_strong_regular(F, W, 1)


def test_coincidence_bound():
    X = LinearSpace(1, sample=range(4))
    F = SetValuedMap(X, X, [(Q(k), Q(k)) for k in range(4)])
    G = SetValuedMap(X, X, [(Q(k), Q(2)) for k in range(4)])
    v = coincidence_bound(F, G, Q(0), 1)
    assert v and v.notes["coincidence_set"] == [Q(2)]
    assert v.notes["dist_to_coincidence"] <= v.notes["estimate"]
    assert not coincidence_bound(F, G, Q(0), Q(1, 2))
    with pytest.raises(ValueError):
        coincidence_bound(F, SetValuedMap(X, X, []), Q(0), 1)


def test_ball_window_uses_candidates():
    X = LinearSpace(1, sample=range(-3, 4))
    W = ball_window(X, 0, 2, X, 0, 1, closed=True, y_candidates=[Q(1), Q(5)])
    assert W.wx == {Q(-2), Q(-1), Q(0), Q(1), Q(2)}
    assert W.wy == {Q(1)}


def test_scale_convention_in_checks():
    # y outside rge F: dist(x, F^-1 y) = inf, and dist(y, F x) = inf for x outside dom F
    F = SetValuedMap(Y, Y, [(Q(0), Q(0))])
    assert check_regular(F, Window([(Q(1), Q(1))]), 1)
    assert not check_regular(F, Window([(Q(0), Q(1))]), 100)
    assert scale(1, INF) == INF
