"""Finite metric spaces, rational vector spaces and product metrics.

Every space exposes ``d(p, q)`` and ``enumerate()``; the latter returns the
finite candidate set that brute-force searches run over.  Linear spaces are
conceptually unbounded, so their candidate set is an explicit ``sample``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Any, Hashable, Iterable, Sequence

from .extnum import INF, ExtReal, ext, inf_over, is_inf, rational, sup_over
from .verdict import Verdict, failed, passed

Point = Hashable


def point_key(p: Any):
    """Total, deterministic order on the point types used in this package."""
    if isinstance(p, (int, Fraction)) and not isinstance(p, bool):
        return (0, Fraction(p))
    if isinstance(p, tuple):
        return (1, tuple(point_key(c) for c in p))
    if isinstance(p, str):
        return (2, p)
    return (3, repr(p))


def sorted_points(points: Iterable[Point]) -> list:
    return sorted(points, key=point_key)


class Space:
    def d(self, p: Point, q: Point) -> ExtReal:
        raise NotImplementedError

    def enumerate(self) -> tuple:
        raise NotImplementedError

    def check_point(self, p: Point) -> Point:
        return p


class ExplicitSpace(Space):
    """A finite metric space given by a symmetric distance matrix."""

    def __init__(self, points: Sequence[Point], dist: Sequence[Sequence[Any]]):
        points = tuple(points)
        if len(set(points)) != len(points):
            raise ValueError("duplicate point ids")
        if len(dist) != len(points) or any(len(row) != len(points) for row in dist):
            raise ValueError("distance matrix shape does not match the point list")
        self.points = points
        self.index = {p: i for i, p in enumerate(points)}
        self.dist = tuple(tuple(ext(v) for v in row) for row in dist)
        if any(is_inf(v) for row in self.dist for v in row):
            raise ValueError("explicit distances must be finite")

    def check_point(self, p):
        if p not in self.index:
            raise ValueError(f"unknown point id {p!r}")
        return p

    def d(self, p, q):
        try:
            return self.dist[self.index[p]][self.index[q]]
        except KeyError as exc:
            raise ValueError(f"unknown point id {exc.args[0]!r}") from None

    def enumerate(self):
        return self.points

    def __repr__(self):
        return f"ExplicitSpace(n={len(self.points)})"


NORMS = ("l1", "linf")


class LinearSpace(Space):
    """Q^n with the l1 or l-infinity norm metric.

    Points of a 1-dimensional space are plain Fractions; higher dimensional
    points are tuples of Fractions.
    """

    def __init__(self, dim: int = 1, norm: str = "linf", sample: Iterable = ()):
        if dim < 1:
            raise ValueError("dimension must be positive")
        norm = norm.lower()
        if norm not in NORMS:
            raise ValueError(f"norm must be one of {NORMS}, got {norm!r}")
        self.dim = dim
        self.norm = norm
        self.sample = tuple(sorted_points({self.coerce(p) for p in sample}))

    def coerce(self, p) -> Point:
        if self.dim == 1:
            if isinstance(p, (tuple, list)):
                if len(p) != 1:
                    raise ValueError(f"expected a scalar point, got {p!r}")
                p = p[0]
            return rational(p)
        if not isinstance(p, (tuple, list)) or len(p) != self.dim:
            raise ValueError(f"expected a {self.dim}-vector, got {p!r}")
        return tuple(rational(c) for c in p)

    def check_point(self, p):
        if self.dim == 1:
            if isinstance(p, (int, Fraction)) and not isinstance(p, bool):
                return p
        elif isinstance(p, tuple) and len(p) == self.dim:
            return p
        raise ValueError(f"{p!r} is not a point of {self!r}")

    def with_sample(self, sample: Iterable) -> "LinearSpace":
        return LinearSpace(self.dim, self.norm, sample)

    def zero(self):
        return Fraction(0) if self.dim == 1 else (Fraction(0),) * self.dim

    def add(self, p, q):
        if self.dim == 1:
            return p + q
        return tuple(a + b for a, b in zip(p, q))

    def sub(self, p, q):
        if self.dim == 1:
            return p - q
        return tuple(a - b for a, b in zip(p, q))

    def mul(self, c, p):
        if self.dim == 1:
            return c * p
        return tuple(c * a for a in p)

    def norm_of(self, p) -> Fraction:
        if self.dim == 1:
            return abs(Fraction(p))
        if self.norm == "l1":
            return sum((abs(a) for a in p), Fraction(0))
        return max(abs(a) for a in p)

    def d(self, p, q):
        return self.norm_of(self.sub(p, q))

    def enumerate(self):
        return self.sample

    def __repr__(self):
        return f"LinearSpace(dim={self.dim}, norm={self.norm!r}, |sample|={len(self.sample)})"


class ProductSpace(Space):
    """X x Y with either the max metric max{d, w*rho} ("xi") or the
    weighted sum d + w*rho ("omega")."""

    def __init__(self, base_x: Space, base_y: Space, kind: str, weight, sample=None):
        if kind not in ("xi", "omega"):
            raise ValueError("kind must be 'xi' or 'omega'")
        weight = ext(weight)
        if not weight > 0 or is_inf(weight):
            raise ValueError("product weight must be a positive rational")
        self.base_x = base_x
        self.base_y = base_y
        self.kind = kind
        self.weight = weight
        self._sample = None if sample is None else tuple(sorted_points(set(sample)))

    def d(self, p, q):
        dx = self.base_x.d(p[0], q[0])
        dy = self.weight * self.base_y.d(p[1], q[1])
        if self.kind == "xi":
            return max(dx, dy)
        return dx + dy

    def enumerate(self):
        if self._sample is not None:
            return self._sample
        return tuple(product(self.base_x.enumerate(), self.base_y.enumerate()))

    def __repr__(self):
        return f"ProductSpace({self.kind}, weight={self.weight})"


def xi(base_x: Space, base_y: Space, lam, sample=None) -> ProductSpace:
    return ProductSpace(base_x, base_y, "xi", lam, sample)


def omega(base_x: Space, base_y: Space, kappa, sample=None) -> ProductSpace:
    return ProductSpace(base_x, base_y, "omega", kappa, sample)


@dataclass(frozen=True)
class Ball:
    """Membership predicate for B(center, r) (open) or B[center, r] (closed).

    ``radius`` may be INF, in which case the ball is the whole space.
    """

    space: Space
    center: Point
    radius: ExtReal
    closed: bool = False

    def __contains__(self, p) -> bool:
        if is_inf(self.radius):
            return True
        dist = self.space.d(self.center, p)
        return dist <= self.radius if self.closed else dist < self.radius


def dist_point_set(space: Space, x: Point, C: Iterable[Point]) -> ExtReal:
    space.check_point(x)
    return inf_over(space.d(x, c) for c in C)


def ball(space: Space, center: Point, r, closed: bool = False, candidates=None) -> tuple:
    """Candidate points within distance < r (open) or <= r (closed) of center."""
    r = ext(r)
    if candidates is None:
        candidates = space.enumerate()
    region = Ball(space, center, r, closed)
    return tuple(p for p in candidates if p in region)


def diameter(space: Space, C: Iterable[Point]) -> ExtReal:
    pts = list(C)
    return sup_over(space.d(p, q) for i, p in enumerate(pts) for q in pts[i + 1:])


def validate_metric(space: Space) -> Verdict:
    """Exhaustive check of the metric axioms over the enumerated points."""
    pts = list(space.enumerate())
    prop = "metric"
    for p in pts:
        if space.d(p, p) != 0:
            return failed(prop, {"axiom": "identity", "points": [p]}, space.d(p, p), Fraction(0))
    for i, p in enumerate(pts):
        for q in pts[i + 1:]:
            dpq, dqp = space.d(p, q), space.d(q, p)
            if dpq != dqp:
                return failed(prop, {"axiom": "symmetry", "points": [p, q]}, dpq, dqp)
            if not dpq > 0:
                return failed(prop, {"axiom": "separation", "points": [p, q]}, dpq, Fraction(0))
    for p in pts:
        for q in pts:
            for r in pts:
                lhs = space.d(p, r)
                rhs = space.d(p, q) + space.d(q, r)
                if lhs > rhs:
                    return failed(prop, {"axiom": "triangle", "points": [p, q, r]}, lhs, rhs)
    return passed(prop, notes={"points": len(pts)})
