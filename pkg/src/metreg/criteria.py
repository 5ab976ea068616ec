"""Ioffe-type sufficient conditions for regularity, checked on finite data.

Each criterion has the same shape: a set of *qualifying* configurations
(non-solutions that are not too far from a reference pair) and, for each of
them, the requirement that some strictly *better* configuration exists.  On
a finite instance that is a finite scan.  When the hypothesis passes, the
matching definition-level checker from :mod:`metreg.regularity` is run on
the same constants; a failure there would contradict the criterion and
raises :class:`SoundnessError`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

from .extnum import INF, ExtReal, ext, inf_over, is_inf, scale
from .maps import SetValuedMap, SingleValuedMap
from .regularity import (GammaFunction, Window, _dist, _positive, check_gamma_regular,
                         check_regular, check_restricted_regular, check_semiregular)
from .spaces import Ball, LinearSpace, ProductSpace, sorted_points, xi
from .verdict import Verdict

OMEGA_WEIGHTS = ("kappa", "kappa_hat")


class SoundnessError(AssertionError):
    """A criterion hypothesis passed but the regularity conclusion failed."""


@dataclass
class CriterionReport:
    variant: str
    hypothesis_holds: bool
    qualifying: int
    failing_configuration: dict | None = None
    conclusion_checked: Verdict | None = None
    constants: dict = field(default_factory=dict)

    @property
    def vacuous(self) -> bool:
        return self.hypothesis_holds and self.qualifying == 0

    @property
    def sound(self) -> bool:
        if not self.hypothesis_holds or self.conclusion_checked is None:
            return True
        return self.conclusion_checked.holds

    def to_dict(self) -> dict:
        from .serialize import encode

        return {
            "variant": self.variant,
            "hypothesis_holds": self.hypothesis_holds,
            "vacuous": self.vacuous,
            "qualifying": self.qualifying,
            "failing_configuration": encode(self.failing_configuration),
            "conclusion_checked": None if self.conclusion_checked is None else self.conclusion_checked.to_dict(),
            "constants": encode(self.constants),
        }


def _minus(a: ExtReal, b) -> ExtReal:
    return INF if is_inf(a) else a - b


def _scan(variant: str, points: list, targets: list, qualifies: Callable, improve: Callable,
          constants: dict) -> CriterionReport:
    count = 0
    for y in targets:
        for p in points:
            anchor = qualifies(p, y)
            if anchor is None:
                continue
            count += 1
            if improve(p, y) is None:
                config = {"point": p, "y": y, "anchor": anchor}
                return CriterionReport(variant, False, count, config, constants=constants)
    return CriterionReport(variant, True, count, constants=constants)


def _finish(report: CriterionReport, conclusion: Callable[[], Verdict], check_conclusion: bool,
            raise_on_unsound: bool) -> CriterionReport:
    if check_conclusion and report.hypothesis_holds:
        report.conclusion_checked = conclusion()
        if raise_on_unsound and not report.sound:
            raise SoundnessError(f"{report.variant}: hypothesis holds but conclusion fails at "
                                 f"{report.conclusion_checked.witness}")
    return report


def criterion_single(g: SingleValuedMap, W: Window, V, kappa, check_conclusion: bool = True,
                     raise_on_unsound: bool = True) -> CriterionReport:
    """Single-valued criterion; improvements are searched over the whole table of g."""
    kappa = _positive(kappa)
    X, Y = g.domain_space, g.target_space
    if not any(g(x) in V for x in W.wx):
        raise ValueError("g(W_X) must meet V")
    points = sorted_points(g.dom)
    vals: dict = {}

    def val(u, y):
        key = (u, y)
        if key not in vals:
            vals[key] = kappa * Y.d(y, g(u))
        return vals[key]

    def qualifies(u, y):
        vu = val(u, y)
        if not vu > 0:
            return None
        for x in sorted_points(W.section(y)):
            if g(x) in V and vu <= val(x, y) - X.d(u, x):
                return x
        return None

    def improve(u, y):
        vu = val(u, y)
        return next((w for w in points if val(w, y) < vu - X.d(w, u)), None)

    report = _scan("single", points, sorted_points(W.wy), qualifies, improve, {"kappa": kappa})
    return _finish(report, lambda: check_restricted_regular(g.as_set_valued(), W, V, kappa),
                   check_conclusion, raise_on_unsound)


def criterion_graph_restricted(F: SetValuedMap, W: Window, V, kappa, lam,
                               check_conclusion: bool = True, raise_on_unsound: bool = True,
                               _variant: str = "graph") -> CriterionReport:
    """Criterion on gph F with the max metric max{d, lam * rho}."""
    kappa, lam = _positive(kappa), _positive(lam, "lambda")
    if not lam < kappa:
        raise ValueError("lambda must be smaller than kappa")
    if not any(v in V for x in W.wx for v in F(x)):
        raise ValueError("F(W_X) must meet V")
    X, Y = F.domain_space, F.target_space
    metric = xi(X, Y, lam)
    graph = F.sorted_graph()

    def qualifies(p, y):
        vp = kappa * Y.d(y, p[1])
        if not vp > 0:
            return None
        for x in sorted_points(W.section(y)):
            for vt in sorted_points(F(x)):
                if vt in V and vp <= kappa * Y.d(y, vt) - metric.d(p, (x, vt)):
                    return (x, vt)
        return None

    def improve(p, y):
        vp = kappa * Y.d(y, p[1])
        return next((q for q in graph if kappa * Y.d(y, q[1]) < vp - metric.d(q, p)), None)

    report = _scan(_variant, graph, sorted_points(W.wy), qualifies, improve,
                   {"kappa": kappa, "lambda": lam})
    return _finish(report, lambda: check_restricted_regular(F, W, V, kappa),
                   check_conclusion, raise_on_unsound)


def criterion_semireg_graph(F: SetValuedMap, xbar, Gamma: Iterable, Lambda: Iterable, kappa, lam,
                            check_conclusion: bool = True, raise_on_unsound: bool = True) -> CriterionReport:
    Lambda = frozenset(Lambda)
    if not Lambda <= F(xbar):
        raise ValueError("Lambda must be a subset of F(xbar)")
    Gamma = list(Gamma)
    W = Window.product([xbar], Gamma)
    report = criterion_graph_restricted(F, W, Lambda, kappa, lam, check_conclusion=False,
                                        _variant="semireg-graph")
    return _finish(report, lambda: check_semiregular(F, xbar, Gamma, Lambda, kappa),
                   check_conclusion, raise_on_unsound)


def _omega_weight(kappa, kappa_hat, omega_weight: str):
    if omega_weight not in OMEGA_WEIGHTS:
        raise ValueError(f"omega_weight must be one of {OMEGA_WEIGHTS}")
    return kappa if omega_weight == "kappa" else kappa_hat


def graph_distance_table(F: SetValuedMap, ys: Iterable, weight) -> dict:
    """(u, y) -> dist((u, y), gph F) with the metric d + weight * rho."""
    X, Y = F.domain_space, F.target_space
    graph = F.sorted_graph()
    table = {}
    for y in ys:
        rho = [(x, weight * Y.d(y, v)) for x, v in graph]
        for u in X.enumerate():
            table[u, y] = inf_over(X.d(u, x) + r for x, r in rho)
    return table


def _check_kappas(kappa, kappa_hat):
    kappa, kappa_hat = _positive(kappa), _positive(kappa_hat, "kappa_hat")
    if kappa_hat < kappa:
        raise ValueError("kappa_hat must be at least kappa")
    return kappa, kappa_hat


def criterion_dist_graph(F: SetValuedMap, W: Window, kappa, kappa_hat, omega_weight: str = "kappa",
                         check_conclusion: bool = True, raise_on_unsound: bool = True,
                         _variant: str = "dist-graph", _conclusion=None) -> CriterionReport:
    """Criterion on u -> dist((u, y), gph F); conclusion is regularity with kappa_hat.

    ``omega_weight`` selects the weight on the target distance in the
    product metric: ``"kappa"`` (default) or ``"kappa_hat"``.
    """
    kappa, kappa_hat = _check_kappas(kappa, kappa_hat)
    weight = _omega_weight(kappa, kappa_hat, omega_weight)
    X, Y = F.domain_space, F.target_space
    alpha = kappa / kappa_hat
    ys = sorted_points(W.wy)
    phi = graph_distance_table(F, ys, weight)
    points = sorted_points(X.enumerate())

    def qualifies(u, y):
        fu = phi[u, y]
        if not fu > 0:
            return None
        for x in sorted_points(W.section(y)):
            bound = scale(kappa, _dist(Y, y, F(x)))
            if fu <= _minus(bound, alpha * X.d(u, x)):
                return x
        return None

    def improve(u, y):
        fu = phi[u, y]
        return next((w for w in points if phi[w, y] < _minus(fu, alpha * X.d(w, u))), None)

    consts = {"kappa": kappa, "kappa_hat": kappa_hat, "omega_weight": omega_weight}
    report = _scan(_variant, points, ys, qualifies, improve, consts)
    conclusion = _conclusion or (lambda: check_regular(F, W, kappa_hat))
    return _finish(report, conclusion, check_conclusion, raise_on_unsound)


def criterion_gamma_graph(F: SetValuedMap, W: Window, gamma: GammaFunction, kappa, kappa_hat,
                          omega_weight: str = "kappa", check_conclusion: bool = True,
                          raise_on_unsound: bool = True) -> CriterionReport:
    """Gauge version: qualifying u satisfy 0 < kappa_hat*phi(u) < kappa*(gamma(x) - d(u,x))."""
    kappa, kappa_hat = _check_kappas(kappa, kappa_hat)
    weight = _omega_weight(kappa, kappa_hat, omega_weight)
    X = F.domain_space
    gvals = gamma.values(X, W, W.wx)
    bad = [x for x in sorted_points(F.dom & W.wx) if not gvals[x] > 0]
    if bad:
        raise ValueError(f"gamma must be positive on dom F cap W_X; gamma({bad[0]!r}) = 0")
    alpha = kappa / kappa_hat
    ys = sorted_points(W.wy)
    phi = graph_distance_table(F, ys, weight)
    points = sorted_points(X.enumerate())

    def qualifies(u, y):
        lhs = kappa_hat * phi[u, y] if not is_inf(phi[u, y]) else INF
        if not lhs > 0:
            return None
        for x in sorted_points(W.section(y)):
            g = gvals[x]
            rhs = INF if is_inf(g) else kappa * (g - X.d(u, x))
            if lhs < rhs:
                return x
        return None

    def improve(u, y):
        fu = phi[u, y]
        return next((w for w in points if phi[w, y] < _minus(fu, alpha * X.d(w, u))), None)

    consts = {"kappa": kappa, "kappa_hat": kappa_hat, "omega_weight": omega_weight, "gamma": gamma.kind}
    report = _scan("gamma", points, ys, qualifies, improve, consts)
    return _finish(report, lambda: check_gamma_regular(F, W, gamma, kappa_hat, "A"),
                   check_conclusion, raise_on_unsound)


def criterion_semireg_dist(F: SetValuedMap, xbar, Gamma: Iterable, kappa, kappa_hat,
                           omega_weight: str = "kappa", check_conclusion: bool = True,
                           raise_on_unsound: bool = True) -> CriterionReport:
    if xbar not in F.dom:
        raise ValueError("xbar must lie in dom F")
    Gamma = list(Gamma)
    W = Window.product([xbar], Gamma)
    kappa_hat = ext(kappa_hat)
    return criterion_dist_graph(
        F, W, kappa, kappa_hat, omega_weight, check_conclusion, raise_on_unsound,
        _variant="semireg-dist",
        _conclusion=lambda: check_semiregular(F, xbar, Gamma, F(xbar), kappa_hat))


def epigraphical(F: SetValuedMap, G: SetValuedMap, center, radii, ell=1) -> SetValuedMap:
    """Truncated epigraphical mapping on gph G.

    E(x, w) = F(x) cap B[zbar, delta] + w  when x in B[xbar, alpha] and
    w in G(x) cap B[wbar, beta]; empty otherwise.  Its domain is X x Y with
    the metric max{d(u, u'), rho(w, w') / ell}, sampled on gph G.
    """
    xbar, zbar, wbar = center
    if zbar not in F(xbar) or wbar not in G(xbar):
        raise ValueError("center must satisfy zbar in F(xbar) and wbar in G(xbar)")
    Y = F.target_space
    if not isinstance(Y, LinearSpace):
        raise TypeError("a linear target space is required")
    alpha, beta, delta = (ext(r) for r in radii)
    ell = _positive(ell, "ell")
    X = F.domain_space
    domain = xi(X, Y, 1 / ell, sample=G.graph)
    bx, bw, bz = Ball(X, xbar, alpha, True), Ball(Y, wbar, beta, True), Ball(Y, zbar, delta, True)
    graph = []
    for x, w in G.graph:
        if x in bx and w in bw:
            graph.extend(((x, w), Y.add(z, w)) for z in F(x) if z in bz)
    return SetValuedMap(domain, Y, graph)
