"""Definition-level checkers for regularity-type properties on finite data.

Every checker scans a finite set of configurations in a deterministic order
and reports the first violation, with both sides of the violated inequality
as exact values.  These checkers are the brute-force oracle layer that the
criteria and perturbation harnesses are validated against.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable

from .extnum import INF, ExtReal, ext, inf_over, is_inf, scale
from .maps import SetValuedMap, SingleValuedMap
from .spaces import Ball, LinearSpace, Point, Space, sorted_points
from .verdict import Verdict, failed, passed

# below this many pairs a process pool costs more than it saves
PARALLEL_THRESHOLD = 20000


class Window:
    """A finite set W of admissible pairs (x, y)."""

    def __init__(self, pairs: Iterable[tuple]):
        self.pairs = frozenset((x, y) for x, y in pairs)
        sections: dict = {}
        for x, y in self.pairs:
            sections.setdefault(y, set()).add(x)
        self._sections = {y: frozenset(xs) for y, xs in sections.items()}

    @classmethod
    def product(cls, U: Iterable[Point], V: Iterable[Point]) -> "Window":
        V = list(V)
        return cls((x, y) for x in U for y in V)

    @property
    def wx(self) -> frozenset:
        return frozenset(x for x, _ in self.pairs)

    @property
    def wy(self) -> frozenset:
        return frozenset(self._sections)

    def section(self, y) -> frozenset:
        return self._sections.get(y, frozenset())

    def sorted_pairs(self) -> list:
        return sorted_points(self.pairs)

    def filter(self, pred) -> "Window":
        return Window(p for p in self.pairs if pred(*p))

    def __contains__(self, pair) -> bool:
        return pair in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.sorted_pairs())

    def __repr__(self):
        return f"Window(|W|={len(self.pairs)})"


def ball_window(X: Space, xbar, a, Y: Space, ybar, b, closed: bool = False,
                x_candidates=None, y_candidates=None) -> Window:
    """B(xbar, a) x B(ybar, b) over the enumerated candidates."""
    xs = X.enumerate() if x_candidates is None else x_candidates
    ys = Y.enumerate() if y_candidates is None else y_candidates
    bx, by = Ball(X, xbar, ext(a), closed), Ball(Y, ybar, ext(b), closed)
    return Window.product([x for x in xs if x in bx], [y for y in ys if y in by])


@dataclass(frozen=True)
class GammaFunction:
    """Gauge gamma: X -> [0, inf].

    kind is one of ``"table"`` (explicit values), ``"constant"``,
    ``"milyutin"`` (gamma(u) = dist(u, X minus W_X) over the enumerated X).
    """

    kind: str
    table: dict = field(default_factory=dict)
    constant: Any = INF

    @classmethod
    def const(cls, c) -> "GammaFunction":
        return cls("constant", constant=ext(c))

    @classmethod
    def infinite(cls) -> "GammaFunction":
        return cls("constant", constant=INF)

    @classmethod
    def milyutin(cls) -> "GammaFunction":
        return cls("milyutin")

    @classmethod
    def from_table(cls, table) -> "GammaFunction":
        return cls("table", table={k: ext(v) for k, v in dict(table).items()})

    def values(self, X: Space, W: Window, points: Iterable[Point]) -> dict:
        points = list(points)
        if self.kind == "constant":
            return {p: self.constant for p in points}
        if self.kind == "table":
            missing = [p for p in points if p not in self.table]
            if missing:
                raise ValueError(f"gamma table undefined at {missing[0]!r}")
            return {p: self.table[p] for p in points}
        if self.kind == "milyutin":
            wx = W.wx
            outside = [u for u in X.enumerate() if u not in wx]
            return {p: inf_over(X.d(p, u) for u in outside) for p in points}
        raise ValueError(f"unknown gamma kind {self.kind!r}")


def _positive(kappa, name="kappa") -> Fraction:
    kappa = ext(kappa)
    if not kappa > 0 or is_inf(kappa):
        raise ValueError(f"{name} must be a positive rational, got {kappa}")
    return kappa


def _dist(space: Space, p, C) -> ExtReal:
    return inf_over(space.d(p, c) for c in C)


def _regular_sides(F: SetValuedMap, x, y):
    lhs = _dist(F.domain_space, x, F.preimage(y))
    rhs = _dist(F.target_space, y, F(x))
    return lhs, rhs


def _regular_chunk(F: SetValuedMap, kappa, pairs):
    for x, y in pairs:
        lhs, dist = _regular_sides(F, x, y)
        if not lhs <= scale(kappa, dist):
            return (x, y, lhs, dist)
    return None


def _jobs(jobs):
    if jobs is None:
        return os.cpu_count() or 1
    return max(1, int(jobs))


def check_regular(F: SetValuedMap, W: Window, kappa, jobs: int | None = 1) -> Verdict:
    """dist(x, F^-1(y)) <= kappa dist(y, F(x)) at every pair of W."""
    kappa = _positive(kappa)
    pairs = W.sorted_pairs()
    n = _jobs(jobs)
    if n > 1 and len(pairs) >= PARALLEL_THRESHOLD:
        size = -(-len(pairs) // n)
        chunks = [pairs[i:i + size] for i in range(0, len(pairs), size)]
        with ProcessPoolExecutor(n) as pool:
            results = list(pool.map(_regular_chunk, [F] * len(chunks), [kappa] * len(chunks), chunks))
        hit = next((r for r in results if r is not None), None)
    else:
        hit = _regular_chunk(F, kappa, pairs)
    consts = {"kappa": kappa}
    if hit is not None:
        x, y, lhs, dist = hit
        return failed("regular", {"x": x, "y": y, "dist_y_Fx": dist}, lhs, scale(kappa, dist),
                      constants=consts, notes={"pairs": len(pairs)})
    return passed("regular", constants=consts, notes={"pairs": len(pairs), "vacuous": not pairs})


def check_restricted_regular(F: SetValuedMap, W: Window, V, kappa) -> Verdict:
    """dist(x, F^-1(y)) <= kappa dist(y, F(x) cap V); V is a set or a Ball."""
    kappa = _positive(kappa)
    pairs = W.sorted_pairs()
    for x, y in pairs:
        rhs_set = [v for v in F(x) if v in V]
        dist = _dist(F.target_space, y, rhs_set)
        if is_inf(dist):
            continue
        lhs = _dist(F.domain_space, x, F.preimage(y))
        if not lhs <= scale(kappa, dist):
            return failed("restricted-regular", {"x": x, "y": y, "dist_y_FxV": dist}, lhs,
                          scale(kappa, dist), constants={"kappa": kappa})
    return passed("restricted-regular", constants={"kappa": kappa},
                  notes={"pairs": len(pairs), "vacuous": not pairs})


def modulus_with_witness(F: SetValuedMap, W: Window):
    """(least admissible kappa, attaining pair or None)."""
    best: ExtReal = Fraction(0)
    where = None
    for x, y in W.sorted_pairs():
        lhs, rhs = _regular_sides(F, x, y)
        if lhs == 0 or is_inf(rhs):
            # lhs <= kappa * INF holds for every kappa under the conventions
            continue
        ratio = INF if (rhs == 0 or is_inf(lhs)) else lhs / rhs
        if ratio > best:
            best, where = ratio, (x, y)
    return best, where


def regularity_modulus(F: SetValuedMap, W: Window) -> ExtReal:
    return modulus_with_witness(F, W)[0]


def restricted_modulus(F: SetValuedMap, W: Window, V) -> ExtReal:
    """Least kappa for which check_restricted_regular(F, W, V, kappa) passes (0 if any works)."""
    best: ExtReal = Fraction(0)
    for x, y in W.sorted_pairs():
        dist = _dist(F.target_space, y, [v for v in F(x) if v in V])
        if is_inf(dist):
            continue
        lhs = _dist(F.domain_space, x, F.preimage(y))
        if lhs == 0:
            continue
        ratio = INF if (dist == 0 or is_inf(lhs)) else lhs / dist
        best = max(best, ratio)
    return best


def gamma_subwindow(F: SetValuedMap, W: Window, gamma: GammaFunction, kappa,
                    variant: str = "A", delta=None) -> Window:
    kappa = _positive(kappa)
    gvals = gamma.values(F.domain_space, W, W.wx)
    bad = [x for x in sorted_points(F.dom & W.wx) if not gvals[x] > 0]
    if bad:
        raise ValueError(f"gamma must be positive on dom F cap W_X; gamma({bad[0]!r}) = 0")
    if variant == "A":
        keep = lambda x, y: scale(kappa, _dist(F.target_space, y, F(x))) < gvals[x]
    elif variant == "B":
        delta = _positive(delta, "delta")
        keep = lambda x, y: _dist(F.target_space, y, F(x)) < scale(delta, gvals[x])
    else:
        raise ValueError("variant must be 'A' or 'B'")
    return W.filter(keep)


def check_gamma_regular(F: SetValuedMap, W: Window, gamma: GammaFunction, kappa,
                        variant: str = "A", delta=None) -> Verdict:
    sub = gamma_subwindow(F, W, gamma, kappa, variant, delta)
    v = check_regular(F, sub, kappa)
    v.property = "gamma-regular"
    v.constants.update({"variant": variant, "gamma": gamma.kind})
    if delta is not None:
        v.constants["delta"] = ext(delta)
    v.notes.update({"subwindow": len(sub), "vacuous": len(sub) == 0})
    return v


def check_milyutin(F: SetValuedMap, W: Window, kappa, variant: str = "A", delta=None) -> Verdict:
    v = check_gamma_regular(F, W, GammaFunction.milyutin(), kappa, variant, delta)
    v.property = "milyutin-regular"
    return v


def check_semiregular(F: SetValuedMap, xbar, Gamma: Iterable, Lambda: Iterable, kappa) -> Verdict:
    """dist(xbar, F^-1(y)) <= kappa dist(y, Lambda) for y in Gamma; Lambda in F(xbar)."""
    kappa = _positive(kappa)
    Lambda = frozenset(Lambda)
    if not Lambda <= F(xbar):
        raise ValueError("Lambda must be a subset of F(xbar)")
    ys = sorted_points(set(Gamma))
    for y in ys:
        lhs = _dist(F.domain_space, xbar, F.preimage(y))
        dist = _dist(F.target_space, y, Lambda)
        if not lhs <= scale(kappa, dist):
            return failed("semiregular", {"x": xbar, "y": y, "dist_y_Lambda": dist}, lhs,
                          scale(kappa, dist), constants={"kappa": kappa})
    return passed("semiregular", constants={"kappa": kappa}, notes={"targets": len(ys), "vacuous": not ys})


def check_aubin(F: SetValuedMap, U: Iterable, V, ell) -> Verdict:
    """F(x) cap V within F(u) + B[0, ell d(x,u)] for all x, u in U.

    ``V=None`` means the whole target (Hausdorff-Lipschitz on U).
    """
    ell = _positive(ell, "ell")
    U = sorted_points(set(U))
    X, Y = F.domain_space, F.target_space
    for x in U:
        vs = [v for v in sorted_points(F(x)) if V is None or v in V]
        if not vs:
            continue
        for u in U:
            if u == x:
                continue
            bound = ell * X.d(x, u)
            Fu = F(u)
            for v in vs:
                lhs = _dist(Y, v, Fu)
                if not lhs <= bound:
                    return failed("aubin", {"x": x, "u": u, "v": v}, lhs, bound, constants={"ell": ell})
    return passed("aubin", constants={"ell": ell}, notes={"points": len(U)})


def hausdorff_lipschitz(F: SetValuedMap, C: Iterable, ell) -> Verdict:
    v = check_aubin(F, C, None, ell)
    v.property = "hausdorff-lipschitz"
    return v


def lipschitz_check(g: SingleValuedMap, U: Iterable, ell) -> Verdict:
    ell = ext(ell)
    U = sorted_points(set(U))
    X, Y = g.domain_space, g.target_space
    for i, x in enumerate(U):
        gx = g(x)
        for u in U[i + 1:]:
            lhs, rhs = Y.d(gx, g(u)), ell * X.d(x, u)
            if not lhs <= rhs:
                return failed("lipschitz", {"x": x, "u": u}, lhs, rhs, constants={"ell": ell})
    return passed("lipschitz", constants={"ell": ell}, notes={"points": len(U)})


def lipschitz_function_check(space: Space, values: dict, U: Iterable, ell) -> Verdict:
    """Lipschitz check for a real-valued table (e.g. a gamma gauge)."""
    ell = ext(ell)
    U = sorted_points(set(U))
    for i, x in enumerate(U):
        for u in U[i + 1:]:
            a, b = values[x], values[u]
            if is_inf(a) or is_inf(b):
                if a != b:
                    return failed("lipschitz", {"x": x, "u": u}, INF, ell * space.d(x, u))
                continue
            lhs, rhs = abs(a - b), ell * space.d(x, u)
            if not lhs <= rhs:
                return failed("lipschitz", {"x": x, "u": u}, lhs, rhs, constants={"ell": ell})
    return passed("lipschitz", constants={"ell": ell})


def _linear(Y) -> LinearSpace:
    if not isinstance(Y, LinearSpace):
        raise TypeError("a linear target space is required")
    return Y


def check_sum_stable(F: SetValuedMap, G: SetValuedMap, center, levels) -> Verdict:
    """Sum-stability sampled at the supplied (alpha, beta) levels.

    For each level: every x in B(xbar, alpha) and v in (F+G)(x) near
    zbar + wbar must split as v = z + w with z near zbar, w near wbar
    (all balls open, radius alpha for x and v, beta for z and w).
    """
    xbar, zbar, wbar = center
    if zbar not in F(xbar) or wbar not in G(xbar):
        raise ValueError("center must satisfy zbar in F(xbar) and wbar in G(xbar)")
    X, Y = F.domain_space, _linear(F.target_space)
    ybar = Y.add(zbar, wbar)
    levels = [(ext(a), ext(b)) for a, b in levels]
    xs = sorted_points(F.dom & G.dom)
    for alpha, beta in levels:
        bx, bv = Ball(X, xbar, alpha), Ball(Y, ybar, alpha)
        bz, bw = Ball(Y, zbar, beta), Ball(Y, wbar, beta)
        for x in xs:
            if x not in bx:
                continue
            Fx, Gx = sorted_points(F(x)), sorted_points(G(x))
            sums = sorted_points({Y.add(z, w) for z in Fx for w in Gx})
            near_z = [z for z in Fx if z in bz]
            near_w = set(w for w in Gx if w in bw)
            for v in sums:
                if v not in bv:
                    continue
                if not any(Y.sub(v, z) in near_w for z in near_z):
                    return failed("sum-stable", {"x": x, "v": v, "alpha": alpha, "beta": beta},
                                  constants={"levels": levels})
    return passed("sum-stable", constants={"levels": levels},
                  notes={"levels_tested": len(levels), "vacuous": not levels})


def check_strong_regular(F: SetValuedMap, W: Window, kappa) -> Verdict:
    """dist(x, F^-1(y) cap W_{.,y}) <= kappa dist(y, F(x)) on W."""
    kappa = _positive(kappa)
    pairs = W.sorted_pairs()
    for x, y in pairs:
        sols = F.preimage(y) & W.section(y)
        lhs = _dist(F.domain_space, x, sols)
        dist = _dist(F.target_space, y, F(x))
        if not lhs <= scale(kappa, dist):
            return failed("strong-regular", {"x": x, "y": y, "dist_y_Fx": dist}, lhs,
                          scale(kappa, dist), constants={"kappa": kappa})
    return passed("strong-regular", constants={"kappa": kappa}, notes={"pairs": len(pairs)})


def coincidence_set(F: SetValuedMap, G: SetValuedMap) -> frozenset:
    return frozenset(x for x in F.dom & G.dom if F(x) & G(x))


def coincidence_bound(F: SetValuedMap, G: SetValuedMap, x, kappa) -> Verdict:
    """dist(x, F^-1(y) cap G^-1(y)) <= kappa inf{rho(y, v): v in F(x)} for y in G(x)."""
    kappa = _positive(kappa)
    if x not in G.dom:
        raise ValueError("x must lie in dom G")
    X, Y = F.domain_space, F.target_space
    xi_set = coincidence_set(F, G)
    Fx = F(x)
    estimate: ExtReal = INF
    notes = {"coincidence_set": sorted_points(xi_set), "dist_to_coincidence": _dist(X, x, xi_set)}
    for y in sorted_points(G(x)):
        lhs = _dist(X, x, F.preimage(y) & G.preimage(y))
        rhs = scale(kappa, _dist(Y, y, Fx))
        estimate = min(estimate, rhs)
        if not lhs <= rhs:
            notes["estimate"] = estimate
            return failed("coincidence", {"x": x, "y": y}, lhs, rhs, constants={"kappa": kappa}, notes=notes)
    notes["estimate"] = estimate
    return passed("coincidence", constants={"kappa": kappa}, notes=notes)
