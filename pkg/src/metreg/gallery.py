"""Built-in instances: discretized worked examples and seeded random ones."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .extnum import INF, ext, rational
from .maps import SetValuedMap, SingleValuedMap, minkowski_sum
from .regularity import Window, ball_window
from .spaces import ExplicitSpace, LinearSpace, Space, sorted_points


@dataclass
class GalleryInstance:
    name: str
    params: dict
    X: Space
    Y: Space
    maps: dict
    windows: dict = field(default_factory=dict)
    constants: dict = field(default_factory=dict)
    center: tuple | None = None
    expected: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.maps[key]


def grid(lo, hi, h) -> list:
    """Points lo, lo+h, ..., up to hi inclusive; lo and hi must be multiples of h."""
    lo, hi, h = rational(lo), rational(hi), ext(h)
    if not h > 0:
        raise ValueError("grid step must be positive")
    k0, k1 = lo / h, hi / h
    if k0.denominator != 1 or k1.denominator != 1:
        raise ValueError(f"step {h} does not divide the interval [{lo}, {hi}]")
    return [k * h for k in range(int(k0), int(k1) + 1)]


def _divides(h, value) -> bool:
    return (value / h).denominator == 1


def _open_grid(radius, h) -> list:
    return [p for p in grid(-radius, radius, h) if abs(p) < radius]


def two_lines(alpha, beta, h) -> GalleryInstance:
    """F(x) = {x, -1} on a grid; window = grid points of (-alpha, alpha) x (-beta, beta)."""
    alpha, beta, h = ext(alpha), ext(beta), ext(h)
    if not (_divides(h, alpha) and _divides(h, beta)):
        raise ValueError("grid step must divide alpha and beta")
    L = max(alpha, beta)
    pts = grid(-L, L, h)
    X = LinearSpace(1, sample=pts)
    Y = LinearSpace(1, sample=set(pts) | {Fraction(-1)})
    F = SetValuedMap.from_function(X, Y, pts, lambda x: {x, Fraction(-1)})
    W = Window.product(_open_grid(alpha, h), _open_grid(beta, h))
    expected: dict = {}
    if beta < 1:
        y = -(beta - h)
        expected["modulus_lower_bound"] = (beta - h) / (1 - beta + h)
        expected["attaining_y"] = y
    if beta + alpha <= Fraction(1, 2) and beta < Fraction(1, 2):
        expected["modulus"] = Fraction(1)
    if beta > 1:
        # y = -1 - t has F^-1(y) = {y}, far from x = kappa*t
        expected["unbounded"] = True
    return GalleryInstance("two-lines", {"alpha": alpha, "beta": beta, "h": h}, X, Y, {"F": F},
                           windows={"W": W}, center=(Fraction(0), Fraction(0)), expected=expected)


def sum_failure(kappa_hat, h) -> GalleryInstance:
    """F(x) = {x, -1}, G(x) = {0, 1}, H = F + G: not regular around (0, 0)."""
    kappa_hat, h = ext(kappa_hat), ext(h)
    t = h * kappa_hat.denominator
    x_w = kappa_hat * t
    L = max(Fraction(3, 2), x_w + h, 1 + 2 * t)
    L = h * -(-L // h)
    pts = grid(-L, L, h)
    X = LinearSpace(1, sample=pts)
    Ybase = LinearSpace(1)
    F = SetValuedMap.from_function(X, Ybase, pts, lambda x: {x, Fraction(-1)})
    G = SetValuedMap.from_function(X, Ybase, pts, lambda x: {Fraction(0), Fraction(1)})
    H = minkowski_sum(F, G)
    Y = LinearSpace(1, sample=H.rge)
    F, G, H = (SetValuedMap(X, Y, M.graph) for M in (F, G, H))
    radii = [r for r in (Fraction(1, 2), Fraction(1, 4), Fraction(1, 10), 6 * t) if r > 0]
    radii = sorted(set(radii), reverse=True)
    windows = {f"ball {r}": ball_window(X, Fraction(0), r, Y, Fraction(0), r, y_candidates=sorted_points(H.rge))
               for r in radii}
    expected = {
        "witness_family": (x_w, -t),
        "witness_lhs": kappa_hat * t + t,
        "witness_rhs": kappa_hat * t,
        "preimage": {-t, -t - 1},
        "diam_G_xbar": Fraction(1),
        "aubin_G_any_ell": True,
    }
    constants = {"alpha": Fraction(2), "beta": Fraction(1, 4), "kappa": Fraction(3), "ell": Fraction(1, 10),
                 "kappa_hat": kappa_hat, "delta": Fraction(6, 100)}
    zero = Fraction(0)
    return GalleryInstance("sum-failure", {"kappa_hat": kappa_hat, "h": h}, X, Y,
                           {"F": F, "G": G, "H": H}, windows=windows, constants=constants,
                           center=(zero, zero, zero), expected=expected)


def linear_perturbation(ell, h, L=2, sign=1) -> GalleryInstance:
    """F(x) = {x} and g(x) = sign*ell*x on the grid [-L, L] of step h."""
    ell, h, L = ext(ell), ext(h), ext(L)
    pts = grid(-L, L, h)
    X = LinearSpace(1, sample=pts)
    Y = LinearSpace(1, sample=grid(-2 * L, 2 * L, h))
    F = SetValuedMap.from_function(X, Y, pts, lambda x: {x})
    g = SingleValuedMap.from_function(X, Y, pts, lambda x: sign * ell * x)
    zero = Fraction(0)
    return GalleryInstance("linear-perturbation", {"ell": ell, "h": h, "L": L, "sign": sign}, X, Y,
                           {"F": F, "g": g}, center=(zero, zero, zero))


def metric_closure(matrix) -> list:
    """All-pairs shortest paths over a symmetric non-negative matrix."""
    d = [list(row) for row in matrix]
    for k in range(len(d)):
        dk = d[k]
        for i, row in enumerate(d):
            dik = row[k]
            d[i] = [a if a <= dik + b else dik + b for a, b in zip(row, dk)]
    return d


def random_space(rng: random.Random, n: int, max_dist: int = 12, den: int = 2) -> ExplicitSpace:
    """Random integer weights over ``den``, repaired into a metric by shortest paths."""
    pts = [f"p{i}" for i in range(n)]
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = m[j][i] = rng.randint(1, max_dist)
    closed = metric_closure(m)
    return ExplicitSpace(pts, [[Fraction(v, den) for v in row] for row in closed])


def random_instance(seed, sizes=(12, 3)) -> GalleryInstance:
    """Reproducible random space, mapping, single-valued map and EVP data.

    ``sizes`` is ``(|X|, max fiber size)`` with |X| <= 60 and fibers <= 8.
    """
    n, fiber = sizes
    if not (1 <= n <= 60 and 0 <= fiber <= 8):
        raise ValueError("sizes must satisfy 1 <= |X| <= 60 and fibers <= 8")
    rng = random.Random(seed)
    X = random_space(rng, n)
    targets = sorted({Fraction(rng.randint(-8, 8), 2) for _ in range(max(3, n // 2))})
    Y = LinearSpace(1, sample=targets)
    graph = []
    for x in X.enumerate():
        if rng.random() < 0.15:
            continue
        for y in rng.sample(targets, rng.randint(1, max(1, min(fiber, len(targets))))):
            graph.append((x, y))
    if not graph:
        graph.append((X.enumerate()[0], targets[0]))
    F = SetValuedMap(X, Y, graph)
    g = SingleValuedMap(X, Y, {x: rng.choice(targets) for x in X.enumerate()})
    phi = {x: (Fraction(rng.randint(0, 20), 2) if rng.random() > 0.05 else INF)
           for x in X.enumerate()}
    start = rng.choice([x for x in X.enumerate() if phi[x] != INF] or [X.enumerate()[0]])
    phi[start] = Fraction(rng.randint(0, 20), 2)
    return GalleryInstance("random", {"seed": seed, "sizes": tuple(sizes)}, X, Y, {"F": F, "g": g},
                           extra={"phi": phi, "start": start})
