"""Ekeland's variational principle (weak form) on finite metric spaces.

Given phi: X -> [0, inf] with phi(x) finite, find u with

    phi(u) + d(u, x) <= phi(x)                (budget)
    phi(u) <= phi(v) + d(v, u)  for all v     (stability)

On a finite space a greedy descent finds such a u.  Each move goes from c
to some v != c with phi(v) + d(v, c) <= phi(c); since d(v, c) > 0 this
strictly lowers phi, so there are fewer moves than points.  Chaining the
moves with the triangle inequality gives the budget inequality, and the
stopping rule is the stability inequality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .extnum import ExtReal, ext, is_inf
from .spaces import Space, point_key
from .verdict import Verdict, failed, passed


@dataclass
class EvpInstance:
    space: Space
    phi: dict
    start: Any
    metric_scale: Fraction = Fraction(1)

    def __post_init__(self):
        self.phi = {p: ext(v) for p, v in self.phi.items()}
        self.metric_scale = ext(self.metric_scale)
        if not self.metric_scale > 0 or is_inf(self.metric_scale):
            raise ValueError("metric_scale must be a positive rational")
        missing = [p for p in self.space.enumerate() if p not in self.phi]
        if missing:
            raise ValueError(f"phi undefined at {missing[0]!r}")
        if self.start not in self.phi:
            raise ValueError(f"start point {self.start!r} not in the space")
        if is_inf(self.phi[self.start]):
            raise ValueError("phi(start) must be finite")

    def d(self, p, q) -> ExtReal:
        return self.metric_scale * self.space.d(p, q)


def evp_path(inst: EvpInstance) -> list:
    """The sequence of points visited by the descent, start first."""
    points = sorted(inst.space.enumerate(), key=point_key)
    phi = inst.phi
    current = inst.start
    path = [current]
    while True:
        budget = phi[current]
        moves = [v for v in points if v != current and not is_inf(phi[v])
                 and phi[v] + inst.d(v, current) <= budget]
        if not moves:
            return path
        current = min(moves, key=lambda v: (phi[v], point_key(v)))
        path.append(current)


def evp_descend(inst: EvpInstance):
    return evp_path(inst)[-1]


def evp_verify(inst: EvpInstance, u) -> Verdict:
    """Check both conclusions for u by a full scan."""
    phi, x = inst.phi, inst.start
    lhs = phi[u] + inst.d(u, x) if not is_inf(phi[u]) else phi[u]
    if not lhs <= phi[x]:
        return failed("evp", {"condition": "budget", "u": u, "x": x}, lhs, phi[x])
    for v in sorted(inst.space.enumerate(), key=point_key):
        rhs = phi[v] + inst.d(v, u) if not is_inf(phi[v]) else phi[v]
        if not phi[u] <= rhs:
            return failed("evp", {"condition": "stability", "u": u, "v": v}, phi[u], rhs)
    return passed("evp", notes={"u": u})
