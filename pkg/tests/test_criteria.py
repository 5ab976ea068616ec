from fractions import Fraction as Q

import pytest

from instances import VARIANTS, criterion_case
from metreg import (ExplicitSpace, GammaFunction, LinearSpace, SetValuedMap, SingleValuedMap, SoundnessError,
                    Window, criteria, gallery)
from metreg.criteria import (criterion_dist_graph, criterion_gamma_graph, criterion_graph_restricted,
                             criterion_semireg_dist, criterion_semireg_graph, criterion_single, epigraphical,
                             graph_distance_table)


def far_pair():
    """X = {x, s} far apart; F(x) = {0}, F(s) = {1}; only y = 1 is queried at x."""
    X = ExplicitSpace(["x", "s"], [[0, 10], [10, 0]])
    Y = LinearSpace(1, sample=[Q(0), Q(1)])
    F = SetValuedMap(X, Y, [("x", Q(0)), ("s", Q(1))])
    return F, Window([("x", Q(1))])


def test_kappa_weight_refuses_a_non_regular_pair():
    F, W = far_pair()
    r = criterion_dist_graph(F, W, 1, 2)
    assert not r.hypothesis_holds
    assert r.failing_configuration["point"] == "x"


def test_kappa_hat_weight_is_unsound():
    F, W = far_pair()
    r = criterion_dist_graph(F, W, 1, 2, "kappa_hat", raise_on_unsound=False)
    assert r.hypothesis_holds and r.vacuous and not r.sound
    assert r.conclusion_checked.lhs == 10 and r.conclusion_checked.rhs == 2
    with pytest.raises(SoundnessError):
        criterion_dist_graph(F, W, 1, 2, "kappa_hat")


def test_unknown_omega_weight():
    F, W = far_pair()
    with pytest.raises(ValueError):
        criterion_dist_graph(F, W, 1, 2, "sum")


def test_kappa_hat_below_kappa_rejected():
    F, W = far_pair()
    with pytest.raises(ValueError):
        criterion_dist_graph(F, W, 2, 1)


def test_graph_distance_table_uses_the_weight():
    F, _ = far_pair()
    t = graph_distance_table(F, [Q(1)], 3)
    assert t["x", Q(1)] == 3
    assert t["s", Q(1)] == 0


def test_two_lines_criteria_pass_non_vacuously():
    gi = gallery.two_lines(Q(1, 4), Q(1, 4), Q(1, 20))
    F, W = gi["F"], gi.windows["W"]
    r = criterion_dist_graph(F, W, 1, 2)
    assert r.hypothesis_holds and not r.vacuous and r.conclusion_checked
    r = criterion_gamma_graph(F, W, GammaFunction.milyutin(), 1, 2)
    assert r.hypothesis_holds and r.conclusion_checked
    r = criterion_semireg_dist(F, Q(0), sorted(W.wy), 1, 2)
    assert r.hypothesis_holds and r.conclusion_checked.property == "semiregular"


def test_graph_restricted_needs_lambda_below_kappa():
    gi = gallery.two_lines(Q(1, 4), Q(1, 4), Q(1, 20))
    with pytest.raises(ValueError):
        criterion_graph_restricted(gi["F"], gi.windows["W"], frozenset(gi["F"].rge), 1, 1)


def test_semireg_graph_is_the_restricted_criterion_on_a_column():
    gi = gallery.two_lines(Q(1, 4), Q(1, 4), Q(1, 20))
    F, W = gi["F"], gi.windows["W"]
    ys = sorted(W.wy)
    a = criterion_semireg_graph(F, Q(0), ys, F(Q(0)), 2, 1)
    b = criterion_graph_restricted(F, Window.product([Q(0)], ys), F(Q(0)), 2, 1, check_conclusion=False)
    assert (a.hypothesis_holds, a.qualifying) == (b.hypothesis_holds, b.qualifying)
    with pytest.raises(ValueError):
        criterion_semireg_graph(F, Q(0), ys, {Q(5)}, 2, 1)


def test_single_valued_criterion():
    X = LinearSpace(1, sample=range(-3, 4))
    g = SingleValuedMap.from_function(X, X, X.enumerate(), lambda x: 2 * x)
    W = Window.product(X.enumerate(), [Q(0), Q(2)])
    r = criterion_single(g, W, frozenset(g.table.values()), 1)
    assert r.hypothesis_holds and not r.vacuous and r.conclusion_checked
    with pytest.raises(ValueError, match="meet"):
        criterion_single(g, W, frozenset({Q(99)}), 1)


def test_failing_hypothesis_skips_the_conclusion():
    X = LinearSpace(1, sample=range(-3, 4))
    g = SingleValuedMap.from_function(X, X, X.enumerate(), lambda x: 2 * x)
    W = Window.product(X.enumerate(), [Q(1)])
    r = criterion_single(g, W, frozenset(g.table.values()), Q(1, 4))
    assert not r.hypothesis_holds and r.conclusion_checked is None and r.sound
    assert r.to_dict()["failing_configuration"]["y"] == "1"


def test_epigraphical_mapping():
    gi = gallery.sum_failure(5, Q(1, 10))
    zero = Q(0)
    E = epigraphical(gi["F"], gi["G"], (zero, zero, zero), (Q(1, 2), Q(1, 2), Q(1, 2)), ell=Q(1, 10))
    assert E((zero, zero)) == {zero}
    assert E((Q(1, 10), zero)) == {Q(1, 10)}
    assert E((zero, Q(1))) == frozenset()
    assert E.domain_space.d((zero, zero), (zero, Q(1))) == 10
    with pytest.raises(ValueError):
        epigraphical(gi["F"], gi["G"], (zero, Q(7), zero), (1, 1, 1))


@pytest.mark.parametrize("variant", VARIANTS)
def test_random_reports_are_sound(variant):
    reports = [r for s in range(40) if (r := criterion_case(variant, s)) is not None]
    assert reports
    assert all(r.sound for r in reports)
    assert any(r.hypothesis_holds and not r.vacuous for r in reports)


def test_report_serializes():
    gi = gallery.two_lines(Q(1, 4), Q(1, 4), Q(1, 20))
    d = criterion_dist_graph(gi["F"], gi.windows["W"], 1, 2).to_dict()
    assert d["constants"]["kappa_hat"] == "2" and d["vacuous"] is False
    assert d["conclusion_checked"]["holds"] is True
