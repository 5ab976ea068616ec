"""Set-valued mappings as finite graphs, and single-valued tables."""

from __future__ import annotations

from collections import defaultdict
from typing import Any, Callable, Iterable, Mapping

from .spaces import LinearSpace, Point, Space, sorted_points

_EMPTY: frozenset = frozenset()


class SetValuedMap:
    """F: X =>> Y identified with a finite graph of (x, y) pairs."""

    def __init__(self, domain_space: Space, target_space: Space, graph: Iterable[tuple]):
        self.domain_space = domain_space
        self.target_space = target_space
        self.graph = frozenset((x, y) for x, y in graph)
        fib: dict = defaultdict(set)
        inv: dict = defaultdict(set)
        for x, y in self.graph:
            fib[x].add(y)
            inv[y].add(x)
        self._fibers = {x: frozenset(ys) for x, ys in fib.items()}
        self._preimages = {y: frozenset(xs) for y, xs in inv.items()}

    @classmethod
    def from_function(cls, domain_space: Space, target_space: Space,
                      points: Iterable[Point], fn: Callable[[Point], Iterable]) -> "SetValuedMap":
        return cls(domain_space, target_space, ((x, y) for x in points for y in fn(x)))

    def __call__(self, x) -> frozenset:
        return self._fibers.get(x, _EMPTY)

    def preimage(self, y) -> frozenset:
        return self._preimages.get(y, _EMPTY)

    @property
    def dom(self) -> frozenset:
        return frozenset(self._fibers)

    @property
    def rge(self) -> frozenset:
        return frozenset(self._preimages)

    def sorted_graph(self) -> list:
        return sorted_points(self.graph)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SetValuedMap):
            return NotImplemented
        return (self.graph == other.graph and self.domain_space is other.domain_space
                and self.target_space is other.target_space)

    def __hash__(self):
        return hash(self.graph)

    def __add__(self, other):
        if isinstance(other, SingleValuedMap):
            return add_single(self, other)
        if isinstance(other, SetValuedMap):
            return minkowski_sum(self, other)
        return NotImplemented

    def __len__(self):
        return len(self.graph)

    def __repr__(self):
        return f"SetValuedMap(|gph|={len(self.graph)}, |dom|={len(self._fibers)})"


class SingleValuedMap:
    """A total table x -> g(x) on an enumerated subset of the domain."""

    def __init__(self, domain_space: Space, target_space: Space, table: Mapping[Point, Any]):
        self.domain_space = domain_space
        self.target_space = target_space
        self.table = dict(table)

    @classmethod
    def from_function(cls, domain_space: Space, target_space: Space,
                      points: Iterable[Point], fn: Callable[[Point], Any]) -> "SingleValuedMap":
        return cls(domain_space, target_space, {x: fn(x) for x in points})

    def __call__(self, x):
        try:
            return self.table[x]
        except KeyError:
            raise ValueError(f"single-valued map undefined at {x!r}") from None

    @property
    def dom(self) -> frozenset:
        return frozenset(self.table)

    def as_set_valued(self) -> SetValuedMap:
        return SetValuedMap(self.domain_space, self.target_space, self.table.items())


def value(F: SetValuedMap, x) -> frozenset:
    return F(x)


def inverse(F: SetValuedMap) -> SetValuedMap:
    return SetValuedMap(F.target_space, F.domain_space, ((y, x) for x, y in F.graph))


def _linear_target(F) -> LinearSpace:
    if not isinstance(F.target_space, LinearSpace):
        raise TypeError("sums need a linear target space")
    return F.target_space


def minkowski_sum(F: SetValuedMap, G: SetValuedMap) -> SetValuedMap:
    """(F+G)(x) = F(x) + G(x), fiberwise."""
    Y = _linear_target(F)
    _linear_target(G)
    graph = set()
    for x in F.dom & G.dom:
        for v in F(x):
            for w in G(x):
                graph.add((x, Y.add(v, w)))
    return SetValuedMap(F.domain_space, Y, graph)


def add_single(F: SetValuedMap, g: SingleValuedMap) -> SetValuedMap:
    """(F+g)(x) = F(x) + g(x); g must be defined on dom F."""
    Y = _linear_target(F)
    graph = set()
    for x, v in F.graph:
        graph.add((x, Y.add(v, g(x))))
    return SetValuedMap(F.domain_space, Y, graph)


def restrict(F: SetValuedMap, X_box, Y_box) -> SetValuedMap:
    """gph F intersected with X_box x Y_box; boxes are sets or Ball predicates."""
    return SetValuedMap(F.domain_space, F.target_space,
                        ((x, y) for x, y in F.graph if x in X_box and y in Y_box))
