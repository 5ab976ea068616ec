"""Perturbation stability of regularity: constants, windows and experiments.

``derive_constants`` turns the free parameters of a stability statement into
the radii it uses.  ``run_experiment`` evaluates every hypothesis on a finite
instance with the checkers of :mod:`metreg.regularity` and then checks the
conclusion on the derived window with the derived constant.

Finite-sample conventions:

* every regularity check of a mapping M only ranges over targets y in rge M;
  off the range dist(x, M^-1(y)) is infinite on a finite graph;
* balls are filtered through the enumerated candidate points;
* decomposition hypotheses quantify over the enumerated fibers.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable

from .extnum import INF, ExtReal, add, ext, is_inf, scale
from .maps import SetValuedMap, SingleValuedMap, add_single, minkowski_sum
from .regularity import (GammaFunction, Window, _dist, _positive, check_aubin, check_gamma_regular,
                         check_milyutin, check_regular, check_restricted_regular, hausdorff_lipschitz,
                         lipschitz_check, lipschitz_function_check)
from .spaces import Ball, LinearSpace, Space, diameter, point_key, sorted_points
from .verdict import Verdict, failed, passed

THEOREMS = ("susvp", "epigraph-global", "acn", "graves5g3", "sumstable", "psonw", "milyutin",
            "semilocal-b", "acn-b", "sumstable-b")
REMARKS = ("remark-restricted", "remark-metric")

_REQUIRED = {
    "susvp": ("a", "b", "r", "c", "kappa_hat", "ell"),
    "epigraph-global": ("a", "kappa_hat", "ell"),
    "acn": ("delta", "kappa_hat", "ell", "alpha", "beta", "diam"),
    "graves5g3": ("a", "b", "kappa_hat", "ell", "alpha", "beta", "g0"),
    "sumstable": ("R", "c", "delta", "kappa_hat", "ell"),
    "psonw": ("kappa", "kappa_hat", "ell"),
    "milyutin": ("kappa", "r", "eps", "kappa_hat"),
    "semilocal-b": ("delta", "kappa_hat", "r", "mu", "ell"),
    "acn-b": ("delta", "kappa_hat", "ell", "alpha", "beta", "diam"),
    "sumstable-b": ("beta", "alpha_hat", "delta", "kappa_hat", "ell"),
    "remark-restricted": ("delta", "kappa", "r"),
    "remark-metric": ("delta", "kappa", "r"),
}

# inputs that may be INF
_UNBOUNDED = {"c", "r", "mu"}


def kappa_hat_lower(kappa, ell) -> Fraction:
    """kappa / (1 - kappa*ell): the open lower bound for the perturbed constant."""
    kappa, ell = _positive(kappa), _positive(ell, "ell")
    if kappa * ell >= 1:
        raise ValueError(f"kappa*ell must be below 1, got {kappa * ell}")
    return kappa / (1 - kappa * ell)


@dataclass
class ConstantSet:
    theorem_id: str
    values: dict
    conditions: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.values[key]

    def get(self, key, default=None):
        return self.values.get(key, default)

    @property
    def conditions_hold(self) -> bool:
        return all(self.conditions.values())

    def to_dict(self) -> dict:
        from .serialize import encode

        return {"theorem": self.theorem_id, "values": encode(self.values),
                "conditions": dict(sorted(self.conditions.items()))}


def _coerce_inputs(theorem_id: str, inputs) -> dict:
    if isinstance(inputs, ConstantSet):
        inputs = inputs.values
    if theorem_id not in _REQUIRED:
        raise ValueError(f"unknown theorem id {theorem_id!r}")
    vals = {k: ext(v) for k, v in dict(inputs).items()}
    missing = [k for k in _REQUIRED[theorem_id] if k not in vals]
    if missing:
        raise ValueError(f"{theorem_id}: missing constants {missing}")
    for k, v in vals.items():
        if is_inf(v) and k not in _UNBOUNDED:
            raise ValueError(f"{k} must be finite")
        if k not in ("c", "diam", "g0") and not v > 0:
            raise ValueError(f"{k} must be positive")
    return vals


def derive_constants(theorem_id: str, inputs) -> ConstantSet:
    """Derived radii and side conditions for a statement; exact arithmetic throughout."""
    v = _coerce_inputs(theorem_id, inputs)
    cond: dict = {}
    if "kappa" in v and "ell" in v:
        v["kappa_hat_lower"] = kappa_hat_lower(v["kappa"], v["ell"])
        if "kappa_hat" in v:
            if not v["kappa_hat"] > v["kappa_hat_lower"]:
                raise ValueError(f"kappa_hat must exceed {v['kappa_hat_lower']}")
    kh = v.get("kappa_hat")

    def susvp_radii():
        v["alpha"] = add(v["a"], scale(kh, add(v["b"], v["r"])))
        v["beta"] = add(v["c"], scale(v["ell"], v["alpha"]))
        v["delta"] = add(add(v["beta"], v["b"]), v["r"])
        v["q_radius"] = min(v["r"], v["b"])

    if theorem_id == "susvp":
        susvp_radii()
    elif theorem_id == "epigraph-global":
        v["b"] = v["r"] = v["a"]
        v["c"] = INF
        susvp_radii()
    elif theorem_id == "acn":
        d = v["delta"]
        v["r"] = 2 * d * (1 + kh) / kh
        v["alpha_hat"] = 3 * d * (1 + kh)
        cond["alpha_hat_lt_alpha"] = v["alpha_hat"] < v["alpha"]
        cond["beta_budget"] = d * (1 + kh) * (3 * v["ell"] + 2 / kh) + d + v["diam"] < v["beta"]
        cond["diam_lt_beta"] = v["diam"] < v["beta"]
    elif theorem_id == "graves5g3":
        v["reach"] = v["a"] + 2 * kh * v["b"]
        cond["domain_budget"] = v["reach"] <= v["alpha"]
        cond["target_budget"] = 2 * v["b"] + v["ell"] * v["reach"] <= v["beta"]
        cond["offset_bound"] = v["g0"] <= v["b"]
    elif theorem_id == "sumstable":
        c, R, d = v["c"], v["R"], v["delta"]
        v["a"] = v["b"] = d
        v["r"] = 2 * d * (1 + kh) / kh
        cond["radius_domain"] = 3 * c * (1 + kh) < R
        cond["radius_target"] = 2 * c + 3 * c * v["ell"] * (1 + kh) + 2 * c * (1 + kh) / kh < R
        cond["delta_lt_c"] = d < c
    elif theorem_id == "milyutin":
        v["delta"] = min(v["kappa"] * v["r"], v["eps"], Fraction(1)) / kh
    elif theorem_id == "semilocal-b":
        v["alpha"] = add(v["delta"], scale(kh, v["r"]))
    elif theorem_id == "acn-b":
        d = v["delta"]
        v["r"] = d * (1 + kh) / kh
        v["alpha_hat"] = d * (2 + kh)
        v["mu"] = v["ell"] * v["alpha_hat"] + v["diam"]
        cond["alpha_hat_lt_alpha"] = v["alpha_hat"] < v["alpha"]
        cond["beta_budget"] = v["ell"] * d * (2 + kh) + d + v["diam"] < v["beta"]
        cond["diam_lt_beta"] = v["diam"] < v["beta"]
    elif theorem_id == "sumstable-b":
        d, ah = v["delta"], v["alpha_hat"]
        v["mu"] = v["beta"]
        v["r"] = d * (1 + kh) / kh
        v["alpha"] = d + kh * v["r"]
        cond["delta_window"] = d * (2 + kh) < ah
        cond["delta_scaled"] = d * (1 + 2 * kh) < kh * ah
        cond["alpha_hat_lt_beta"] = ah < v["beta"]
    elif theorem_id == "remark-restricted":
        k = v["kappa"]
        v["beta_shrunk"] = min(v["delta"], scale(k, v["r"]) / (2 + 2 * k)) if not is_inf(v["r"]) else v["delta"]
    elif theorem_id == "remark-metric":
        k = v["kappa"]
        v["beta_shrunk"] = min(v["delta"], scale(k, v["r"]) / (1 + k)) if not is_inf(v["r"]) else v["delta"]
    return ConstantSet(theorem_id, v, cond)


@dataclass
class PerturbInstance:
    """Everything a stability experiment may need.

    ``G`` is a set-valued perturbation; ``g`` a single-valued one (exactly one
    of them is used).  ``Omega``/``gamma`` feed the gauge statement and
    ``U``/``V`` the Milyutin statement.  ``q_candidates`` lists the shifts
    tried in the conclusion of the restricted statement (default: wbar only).
    """

    F: SetValuedMap
    center: tuple
    constants: dict
    G: SetValuedMap | None = None
    g: SingleValuedMap | None = None
    Omega: Window | None = None
    gamma: GammaFunction | None = None
    U: Any = None
    V: Any = None
    q_candidates: Any = None

    @property
    def perturbation(self) -> SetValuedMap:
        if self.G is not None:
            return self.G
        if self.g is not None:
            return self.g.as_set_valued()
        raise ValueError("instance needs G or g")

    def sum_map(self) -> SetValuedMap:
        if self.g is not None and self.G is None:
            return add_single(self.F, self.g)
        return minkowski_sum(self.F, self.perturbation)


@dataclass
class ExperimentReport:
    theorem_id: str
    hypotheses: list
    conclusion: Verdict
    constants: ConstantSet
    notes: dict = field(default_factory=dict)

    @property
    def hypotheses_hold(self) -> bool:
        return all(v.holds for _, v in self.hypotheses)

    @property
    def consistent(self) -> bool:
        """False only when every hypothesis passed and the conclusion failed."""
        return not self.hypotheses_hold or self.conclusion.holds

    @property
    def holds(self) -> bool:
        return self.hypotheses_hold and self.conclusion.holds

    def failed_hypotheses(self) -> list:
        return [name for name, v in self.hypotheses if not v.holds]

    def to_dict(self) -> dict:
        from .serialize import encode

        return {
            "theorem": self.theorem_id,
            "hypotheses": [{"name": n, **v.to_dict()} for n, v in self.hypotheses],
            "hypotheses_hold": self.hypotheses_hold,
            "conclusion": self.conclusion.to_dict(),
            "consistent": self.consistent,
            "constants": self.constants.to_dict(),
            "notes": encode(self.notes),
        }


def _condition(name: str, holds: bool, lhs=None, rhs=None) -> Verdict:
    if holds:
        return passed(name)
    return failed(name, {"condition": name}, lhs, rhs)


def _points(space: Space, fallback) -> list:
    pts = space.enumerate()
    return sorted_points(pts if pts else fallback)


def _in_ball(space: Space, pts, center, radius, closed=False) -> list:
    region = Ball(space, center, radius, closed)
    return [p for p in pts if p in region]


def _misses(space: Space, pts: list, center, radius) -> bool:
    """True when the open ball B(center, radius) contains none of the sorted points."""
    if not pts:
        return True
    if is_inf(radius):
        return False
    if isinstance(space, LinearSpace) and space.dim == 1:
        i = bisect_left(pts, center)
        near = pts[max(0, i - 1):i + 1]
        return all(abs(p - center) >= radius for p in near)
    return all(space.d(center, p) >= radius for p in pts)


def _covered(space: Space, pts: list, allowed, center) -> bool:
    """The ball center lies in the sampled region: on an allowed candidate, strictly
    between two adjacent allowed candidates (1-D), or nearest to an allowed one."""
    if not pts:
        return False
    if isinstance(space, LinearSpace) and space.dim == 1:
        i = bisect_left(pts, center)
        if i < len(pts) and pts[i] == center:
            return center in allowed
        return 0 < i < len(pts) and pts[i - 1] in allowed and pts[i] in allowed
    best = min(space.d(center, p) for p in pts)
    return all(p in allowed for p in pts if space.d(center, p) == best)


def _range_window(M: SetValuedMap, xs, ybar, yrad, closed=False, keep=None) -> Window:
    ys = _in_ball(M.target_space, sorted_points(M.rge), ybar, yrad, closed)
    W = Window.product(xs, ys)
    return W if keep is None else W.filter(keep)


def check_decomposition(F: SetValuedMap, G: SetValuedMap, xs: Iterable, v_ball, w_ball) -> Verdict:
    """Every v in (F+G)(x) within v_ball splits as v = z + w, z in F(x), w in G(x) within w_ball."""
    Y = F.target_space
    count = 0
    for x in sorted_points(set(xs)):
        Fx, Gx = F(x), sorted_points(G(x))
        for v in sorted_points({Y.add(z, w) for z in Fx for w in Gx}):
            if v not in v_ball:
                continue
            count += 1
            if not any(w in w_ball and Y.sub(v, w) in Fx for w in Gx):
                return failed("decomposition", {"x": x, "v": v})
    return passed("decomposition", notes={"checked": count, "vacuous": count == 0})


def check_graves_property(H: SetValuedMap, xbar, zbar, a, b, reach, kappa_hat) -> Verdict:
    """For y, y_hat near zbar and x_hat in H^-1(y_hat) near xbar, some x in
    H^-1(y) within reach of xbar has d(x, x_hat) <= kappa_hat * rho(y, y_hat)."""
    X, Y = H.domain_space, H.target_space
    ys = _in_ball(Y, sorted_points(H.rge), zbar, b)
    bx, breach = Ball(X, xbar, a), Ball(X, xbar, reach)
    count = 0
    for y_hat in ys:
        for x_hat in sorted_points(p for p in H.preimage(y_hat) if p in bx):
            for y in ys:
                count += 1
                sols = [p for p in H.preimage(y) if p in breach]
                lhs = _dist(X, x_hat, sols)
                rhs = kappa_hat * Y.d(y, y_hat)
                if not lhs <= rhs:
                    return failed("graves-property", {"y": y, "y_hat": y_hat, "x_hat": x_hat}, lhs, rhs,
                                  constants={"kappa_hat": kappa_hat})
    return passed("graves-property", constants={"kappa_hat": kappa_hat},
                  notes={"checked": count, "vacuous": count == 0})


def build_window_psonw(Omega: Window, gamma: GammaFunction, g: SingleValuedMap, ell,
                       x_candidates=None, y_candidates=None, ball_candidates=None) -> Window:
    """Pairs (x, y) with B(x, gamma(x)) x B(y - g(x), ell*gamma(x)) inside Omega.

    Both balls are filtered through the enumerated candidates, and the center
    of the y-ball must itself be covered by allowed candidates, so a ball that
    falls between grid points is not counted as inside.  gamma must be
    positive and 1-Lipschitz on Omega_X.
    """
    ell = ext(ell)
    X, Y = g.domain_space, g.target_space
    xs = _points(X, g.dom) if x_candidates is None else sorted_points(x_candidates)
    ys = sorted_points(Y.enumerate() if y_candidates is None else y_candidates)
    bx_pts = _points(X, g.dom)
    by_pts = sorted_points(Y.enumerate() if ball_candidates is None else ball_candidates)
    ox = sorted_points(Omega.wx)
    gv_omega = gamma.values(X, Omega, ox)
    if any(not gv_omega[x] > 0 for x in ox):
        raise ValueError("gamma must be positive on Omega_X")
    if not lipschitz_function_check(X, gv_omega, ox, 1):
        raise ValueError("gamma must be Lipschitz on Omega_X with constant 1")
    gv = gamma.values(X, Omega, xs)
    rows: dict = {}
    for p, q in Omega.pairs:
        rows.setdefault(p, set()).add(q)
    pairs = []
    for x in xs:
        if x not in g.dom or x not in rows:
            continue
        gx, rad = g(x), gv[x]
        near_x = _in_ball(X, bx_pts, x, rad) or [x]
        allowed = set.intersection(*(rows.get(p, set()) for p in near_x))
        # the y-ball is inside Omega iff it misses every candidate outside `allowed`
        outside = [q for q in by_pts if q not in allowed]
        for y in ys:
            c = Y.sub(y, gx)
            if _covered(Y, by_pts, allowed, c) and _misses(Y, outside, c, scale(ell, rad)):
                pairs.append((x, y))
    return Window(pairs)


def build_window_milyutin_eps(U, V, g: SingleValuedMap, ell, eps, y_candidates=None,
                              ball_candidates=None) -> Window:
    """Pairs (x, y), x in U, with B(y - g(x), eps*ell*dist(x, X minus U)) inside V."""
    ell, eps = ext(ell), ext(eps)
    X, Y = g.domain_space, g.target_space
    U, V = frozenset(U), frozenset(V)
    outside = [u for u in X.enumerate() if u not in U]
    ys = sorted_points(Y.enumerate() if y_candidates is None else y_candidates)
    by_pts = sorted_points(Y.enumerate() if ball_candidates is None else ball_candidates)
    missing = [q for q in by_pts if q not in V]
    pairs = []
    for x in sorted_points(U):
        if x not in g.dom:
            continue
        rad = scale(eps * ell, _dist(X, x, outside))
        for y in ys:
            c = Y.sub(y, g(x))
            if _covered(Y, by_pts, V, c) and _misses(Y, missing, c, rad):
                pairs.append((x, y))
    return Window(pairs)


def _violation_key(X, Y, center):
    xbar, ybar = center

    def key(pair):
        x, y = pair
        dx, dy = X.d(x, xbar), Y.d(y, ybar)
        return (max(dx, dy), dy, dx, point_key(y), point_key(x))
    return key


def find_violation(H: SetValuedMap, kappa_hat, windows: Iterable[Window], center) -> dict | None:
    """Closest-to-center pair violating regularity with kappa_hat, over shrinking windows.

    Returns ``{"x", "y", "lhs", "rhs", "scales"}`` where ``scales`` records,
    per window, whether a violation was found there; None if no window has one.
    """
    kappa_hat = _positive(kappa_hat, "kappa_hat")
    X, Y = H.domain_space, H.target_space
    key = _violation_key(X, Y, center)
    found, scales = None, []
    for W in windows:
        hit = None
        for x, y in sorted(W.pairs, key=key):
            lhs = _dist(X, x, H.preimage(y))
            rhs = scale(kappa_hat, _dist(Y, y, H(x)))
            if not lhs <= rhs:
                hit = {"x": x, "y": y, "lhs": lhs, "rhs": rhs}
                break
        scales.append({"pairs": len(W), "violated": hit is not None})
        if hit is not None and (found is None or key((hit["x"], hit["y"])) < key((found["x"], found["y"]))):
            found = hit
    if found is None:
        return None
    found["scales"] = scales
    return found


# experiments ---------------------------------------------------------------


def _kappa(cs: ConstantSet):
    if "kappa" not in cs.values:
        raise ValueError(f"{cs.theorem_id}: constant kappa is required for the experiment")
    return cs["kappa"]


def _q_candidates(inst: PerturbInstance, Y, wbar, radius) -> list:
    cands = set(inst.q_candidates or ()) | {wbar}
    return _in_ball(Y, sorted_points(cands), wbar, radius, closed=True)


def _susvp_core(inst, cs, H, jobs, a, b, r, c, q_list, alpha, beta, delta):
    F, G = inst.F, inst.perturbation
    X, Y = F.domain_space, F.target_space
    xbar, zbar, wbar = inst.center
    xs = _points(X, F.dom)
    kappa, kh, ell = _kappa(cs), cs["kappa_hat"], cs["ell"]
    hyps = []
    W1 = _range_window(F, _in_ball(X, xs, xbar, alpha), zbar, delta)
    hyps.append(("restricted-regular F", check_restricted_regular(F, W1, Ball(Y, zbar, delta, True), kappa)))
    hyps.append(("aubin G", check_aubin(G, _in_ball(X, xs, xbar, alpha), Ball(Y, wbar, beta), ell)))
    ybar = Y.add(zbar, wbar)
    hyps.append(("decomposition", check_decomposition(
        F, G, _in_ball(X, xs, xbar, a), Ball(Y, ybar, add(b, r), True),
        Ball(Y, wbar, add(scale(ell, a), c)))))
    conclusion = None
    for q in q_list:
        center_y = Y.add(zbar, q)
        W = _range_window(H, _in_ball(X, xs, xbar, a), center_y, b)
        v = check_restricted_regular(H, W, Ball(Y, center_y, r, True), kh)
        v.notes["q"] = q
        if conclusion is None or not v.holds:
            conclusion = v
        if not v.holds:
            break
    conclusion.notes["q_tested"] = len(q_list)
    return hyps, conclusion


def _exp_susvp(inst, cs, H, jobs):
    Y = inst.F.target_space
    wbar = inst.center[2]
    q_list = _q_candidates(inst, Y, wbar, cs["q_radius"])
    return _susvp_core(inst, cs, H, jobs, cs["a"], cs["b"], cs["r"], cs["c"], q_list,
                       cs["alpha"], cs["beta"], cs["delta"])


def _exp_epigraph_global(inst, cs, H, jobs):
    F, G = inst.F, inst.perturbation
    X = F.domain_space
    xs = _points(X, F.dom)
    hyps = [
        ("regular F", check_regular(F, Window.product(xs, sorted_points(F.rge)), _kappa(cs), jobs)),
        ("hausdorff-lipschitz G", hausdorff_lipschitz(G, xs, cs["ell"])),
    ]
    W = Window.product(xs, sorted_points(H.rge))
    return hyps, check_regular(H, W, cs["kappa_hat"], jobs)


def _regular_on_balls(M, xs, xbar, xr, ybar, yr, kappa, jobs, name):
    X = M.domain_space
    W = _range_window(M, _in_ball(X, xs, xbar, xr), ybar, yr)
    return (name, check_regular(M, W, kappa, jobs))


def _diam_condition(G, xbar, beta):
    diam = diameter(G.target_space, sorted_points(G(xbar)))
    return diam, ("diam G(xbar) < beta", _condition("diam-below-beta", diam < beta, diam, beta))


def _conditions(cs: ConstantSet) -> list:
    return [(f"condition {k}", _condition(k, ok)) for k, ok in sorted(cs.conditions.items())]


def _exp_acn(inst, cs, H, jobs, variant="acn"):
    F, G = inst.F, inst.perturbation
    X, Y = F.domain_space, F.target_space
    xbar, zbar, wbar = inst.center
    xs = _points(X, F.dom)
    alpha, beta = cs["alpha"], cs["beta"]
    _, diam_check = _diam_condition(G, xbar, beta)
    hyps = [
        _regular_on_balls(F, xs, xbar, alpha, zbar, beta, _kappa(cs), jobs, "regular F"),
        ("hausdorff-lipschitz G", hausdorff_lipschitz(G, _in_ball(X, xs, xbar, alpha), cs["ell"])),
        diam_check,
    ] + [c for c in _conditions(cs) if c[0] != "condition diam_lt_beta"]
    d = cs["delta"]
    _, concl = _regular_on_balls(H, xs, xbar, d, Y.add(zbar, wbar), d, cs["kappa_hat"], jobs, "")
    return hyps, concl


def _exp_graves(inst, cs, H, jobs):
    F = inst.F
    if inst.g is None:
        raise ValueError("graves5g3 needs a single-valued perturbation g")
    X, Y = F.domain_space, F.target_space
    xbar, zbar, _ = inst.center
    xs = _points(X, F.dom)
    alpha, beta, reach = cs["alpha"], cs["beta"], cs["reach"]
    W1 = _range_window(F, _in_ball(X, xs, xbar, alpha), zbar, beta)
    g0 = Y.norm_of(inst.g(xbar))
    hyps = [
        ("restricted-regular F", check_restricted_regular(F, W1, Ball(Y, zbar, beta, True), _kappa(cs))),
        ("lipschitz g", lipschitz_check(inst.g, _in_ball(X, _points(X, inst.g.dom), xbar, reach, True),
                                        cs["ell"])),
        ("offset g(xbar)", _condition("offset", g0 <= cs["b"] and g0 == cs["g0"], g0, cs["b"])),
    ] + _conditions(cs)
    concl = check_graves_property(H, xbar, zbar, cs["a"], cs["b"], reach, cs["kappa_hat"])
    return hyps, concl


def _exp_sumstable(inst, cs, H, jobs):
    F, G = inst.F, inst.perturbation
    X, Y = F.domain_space, F.target_space
    xbar, zbar, wbar = inst.center
    xs = _points(X, F.dom)
    R, d, r = cs["R"], cs["delta"], cs["r"]
    ybar = Y.add(zbar, wbar)
    hyps = [
        _regular_on_balls(F, xs, xbar, R, zbar, R, _kappa(cs), jobs, "regular F"),
        ("aubin G", check_aubin(G, _in_ball(X, xs, xbar, R), Ball(Y, wbar, R), cs["ell"])),
        ("decomposition", check_decomposition(F, G, _in_ball(X, xs, xbar, d), Ball(Y, ybar, d + r, True),
                                              Ball(Y, wbar, cs["c"]))),
    ] + _conditions(cs)
    _, concl = _regular_on_balls(H, xs, xbar, d, ybar, d, cs["kappa_hat"], jobs, "")
    return hyps, concl


def _exp_psonw(inst, cs, H, jobs):
    F, g = inst.F, inst.g
    if g is None or inst.Omega is None or inst.gamma is None:
        raise ValueError("psonw needs g, Omega and gamma")
    X = F.domain_space
    Omega, gamma = inst.Omega, inst.gamma
    ox = sorted_points(Omega.wx)
    gv = gamma.values(X, Omega, ox)
    positive = all(gv[x] > 0 for x in ox)
    W = build_window_psonw(Omega, gamma, g, cs["ell"], y_candidates=sorted_points(H.rge))
    omega_f = Omega.filter(lambda x, y: y in F.rge)
    hyps = [
        ("gamma positive", _condition("gamma-positive", positive)),
        ("gamma 1-lipschitz", lipschitz_function_check(X, gv, ox, 1)),
        ("gamma-regular F", check_gamma_regular(F, omega_f, gamma, _kappa(cs), "A")),
        ("lipschitz g", lipschitz_check(g, ox, cs["ell"])),
        ("dom F meets W_X", _condition("dom-meets-window", bool(F.dom & W.wx))),
    ]
    return hyps, check_gamma_regular(H, W, gamma, cs["kappa_hat"], "A")


def _exp_milyutin(inst, cs, H, jobs):
    F, g = inst.F, inst.g
    if g is None or inst.U is None or inst.V is None:
        raise ValueError("milyutin needs g, U and V")
    if "ell" not in cs.values:
        raise ValueError("milyutin: constant ell is required for the experiment")
    U, V = frozenset(inst.U), frozenset(inst.V)
    W_eps = build_window_milyutin_eps(U, V, g, cs["ell"], cs["eps"], y_candidates=sorted_points(H.rge))
    base = Window.product(sorted_points(U), sorted_points(V & F.rge))
    hyps = [
        ("milyutin-regular F", check_milyutin(F, base, _kappa(cs), "B", cs["r"])),
        ("lipschitz g", lipschitz_check(g, U, cs["ell"])),
        ("window nonempty", _condition("window-nonempty", len(W_eps) > 0)),
    ]
    return hyps, check_milyutin(H, W_eps, cs["kappa_hat"], "B", cs["delta"])


def _semilocal_core(inst, cs, H, jobs, alpha, mu, r, d, dec_alpha=None):
    F, G = inst.F, inst.perturbation
    X, Y = F.domain_space, F.target_space
    xbar, zbar, wbar = inst.center
    xs = _points(X, F.dom)
    ybar = Y.add(zbar, wbar)
    outer = add(add(mu, d), r)
    near = Ball(Y, zbar, outer)
    keep_f = lambda x, y: _dist(Y, y, [v for v in F(x) if v in near]) < r
    W1 = _range_window(F, _in_ball(X, xs, xbar, alpha), zbar, add(mu, d), keep=keep_f)
    dec_alpha = alpha if dec_alpha is None else dec_alpha
    hyps = [
        ("regular F", check_regular(F, W1, _kappa(cs), jobs)),
        ("aubin G", check_aubin(G, _in_ball(X, xs, xbar, alpha), Ball(Y, wbar, mu), cs["ell"])),
        ("decomposition", check_decomposition(F, G, _in_ball(X, xs, xbar, dec_alpha),
                                              Ball(Y, ybar, add(d, r)), Ball(Y, wbar, mu))),
    ]
    keep_h = lambda x, y: _dist(Y, y, H(x)) < r
    W = _range_window(H, _in_ball(X, xs, xbar, d), ybar, d, keep=keep_h)
    return hyps, check_regular(H, W, cs["kappa_hat"], jobs)


def _exp_semilocal_b(inst, cs, H, jobs):
    return _semilocal_core(inst, cs, H, jobs, cs["alpha"], cs["mu"], cs["r"], cs["delta"])


def _exp_acn_b(inst, cs, H, jobs):
    return _exp_acn(inst, cs, H, jobs, "acn-b")


def _exp_sumstable_b(inst, cs, H, jobs):
    F, G = inst.F, inst.perturbation
    X, Y = F.domain_space, F.target_space
    xbar, zbar, wbar = inst.center
    xs = _points(X, F.dom)
    beta, ah, d = cs["beta"], cs["alpha_hat"], cs["delta"]
    ybar = Y.add(zbar, wbar)
    hyps = [
        _regular_on_balls(F, xs, xbar, beta, zbar, 2 * beta, _kappa(cs), jobs, "regular F"),
        ("aubin G", check_aubin(G, _in_ball(X, xs, xbar, beta), Ball(Y, wbar, beta), cs["ell"])),
        ("decomposition", check_decomposition(F, G, _in_ball(X, xs, xbar, ah), Ball(Y, ybar, ah),
                                              Ball(Y, wbar, beta))),
    ] + _conditions(cs)
    _, concl = _regular_on_balls(H, xs, xbar, d, ybar, d, cs["kappa_hat"], jobs, "")
    return hyps, concl


def _exp_remark(inst, cs, H, jobs):
    F = inst.F
    X, Y = F.domain_space, F.target_space
    xbar, ybar = inst.center[0], inst.center[1]
    if ybar not in F(xbar):
        raise ValueError("center must lie on the graph")
    xs = _points(X, F.dom)
    d, r, kappa = cs["delta"], cs["r"], cs["kappa"]
    if cs.theorem_id == "remark-restricted":
        W1 = _range_window(F, _in_ball(X, xs, xbar, d), ybar, d)
        hyp = ("restricted-regular", check_restricted_regular(F, W1, Ball(Y, ybar, r), kappa))
    else:
        keep = lambda x, y: _dist(Y, y, F(x)) < r
        W1 = _range_window(F, _in_ball(X, xs, xbar, d), ybar, d, keep=keep)
        hyp = ("regular on dist-window", check_regular(F, W1, kappa, jobs))
    b = cs["beta_shrunk"]
    _, concl = _regular_on_balls(F, xs, xbar, b, ybar, b, kappa, jobs, "")
    return [hyp], concl


_EXPERIMENTS = {
    "susvp": _exp_susvp,
    "epigraph-global": _exp_epigraph_global,
    "acn": _exp_acn,
    "graves5g3": _exp_graves,
    "sumstable": _exp_sumstable,
    "psonw": _exp_psonw,
    "milyutin": _exp_milyutin,
    "semilocal-b": _exp_semilocal_b,
    "acn-b": _exp_acn_b,
    "sumstable-b": _exp_sumstable_b,
    "remark-restricted": _exp_remark,
    "remark-metric": _exp_remark,
}


def _instance_constants(theorem_id: str, inst: PerturbInstance) -> dict:
    consts = dict(inst.constants)
    if theorem_id in ("acn", "acn-b") and "diam" not in consts:
        xbar = inst.center[0]
        consts["diam"] = diameter(inst.F.target_space, sorted_points(inst.perturbation(xbar)))
    if theorem_id == "graves5g3" and inst.g is None:
        raise ValueError("graves5g3 needs a single-valued perturbation g")
    if theorem_id == "graves5g3" and "g0" not in consts:
        consts["g0"] = inst.F.target_space.norm_of(inst.g(inst.center[0]))
    return consts


def run_experiment(theorem_id: str, inst: PerturbInstance, jobs: int | None = 1) -> ExperimentReport:
    """Check every hypothesis, then the conclusion on the derived window."""
    if theorem_id not in _EXPERIMENTS:
        raise ValueError(f"unknown theorem id {theorem_id!r}")
    xbar, zbar = inst.center[0], inst.center[1]
    if zbar not in inst.F(xbar):
        raise ValueError("center must satisfy zbar in F(xbar)")
    remark = theorem_id in REMARKS
    if not remark and inst.center[2] not in inst.perturbation(xbar):
        raise ValueError("center must satisfy wbar in G(xbar)")
    cs = derive_constants(theorem_id, _instance_constants(theorem_id, inst))
    H = inst.F if remark else inst.sum_map()
    hyps, conclusion = _EXPERIMENTS[theorem_id](inst, cs, H, jobs)
    notes = {"conclusion_vacuous": conclusion.vacuous}
    return ExperimentReport(theorem_id, hyps, conclusion, cs, notes)
