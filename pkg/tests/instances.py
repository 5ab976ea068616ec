"""Seeded instance generators shared by the criterion and acceptance suites."""

import random
from fractions import Fraction

from metreg import Window, criteria, gallery
from metreg.regularity import GammaFunction

VARIANTS = ("single", "graph", "dist-graph", "gamma", "semireg-graph", "semireg-dist")
KAPPAS = (Fraction(1, 2), Fraction(1), Fraction(2), Fraction(4), Fraction(8))


def criterion_case(variant: str, seed: int, omega_weight: str = "kappa"):
    """Run one criterion on a random instance; None when the draw violates a precondition."""
    rng = random.Random(seed * 7 + 3)
    gi = gallery.random_instance(seed, (rng.randint(4, 9), rng.randint(1, 3)))
    F, ys = gi["F"], list(gi.Y.enumerate())
    xs = list(gi.X.enumerate())
    k = rng.choice(KAPPAS)
    W = Window([(x, y) for x in xs for y in ys if rng.random() < 0.3] or [(xs[0], ys[0])])
    opts = {"raise_on_unsound": False}
    try:
        if variant == "single":
            return criteria.criterion_single(gi["g"], W, frozenset(ys), k, **opts)
        if variant == "graph":
            V = {y for y in ys if rng.random() < 0.7}
            anchors = sorted(F.dom & W.wx)
            if anchors:
                V |= F(anchors[0])
            lam = k * rng.choice((Fraction(1, 4), Fraction(1, 2), Fraction(9, 10)))
            return criteria.criterion_graph_restricted(F, W, frozenset(V), k, lam, **opts)
        if variant == "dist-graph":
            return criteria.criterion_dist_graph(F, W, k, k * rng.choice((1, 2, 4)), omega_weight, **opts)
        if variant == "gamma":
            gamma = rng.choice((GammaFunction.milyutin(), GammaFunction.const(rng.choice((3, 10, 40)))))
            return criteria.criterion_gamma_graph(F, W, gamma, k, k * rng.choice((1, 2, 4)), omega_weight, **opts)
        xbar = rng.choice(sorted(F.dom))
        Gamma = [y for y in ys if rng.random() < 0.5]
        if variant == "semireg-graph":
            return criteria.criterion_semireg_graph(F, xbar, Gamma, F(xbar), k, k / 2, **opts)
        if variant == "semireg-dist":
            return criteria.criterion_semireg_dist(F, xbar, Gamma, k, 2 * k, omega_weight, **opts)
    except ValueError:
        return None
    raise ValueError(variant)
