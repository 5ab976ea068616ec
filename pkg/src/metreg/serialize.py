"""Exact JSON encoding of values, reports and instances.

Rationals travel as ``"p/q"`` strings and the infinite value as ``"inf"``;
no float ever crosses the boundary.  Output is key-sorted so that equal
inputs produce byte-identical reports.

Instance schema (all keys optional except ``spaces``)::

    {
      "spaces":  {"X": {"kind": "linear", "dim": 1, "norm": "linf", "sample": ["-1", "0", "1/2"]},
                  "Y": {"kind": "explicit", "points": ["a", "b"], "dist": [["0", "1"], ["1", "0"]]}},
      "maps":    {"F": {"domain": "X", "target": "Y", "graph": [["0", "a"], ...]},
                  "g": {"domain": "X", "target": "Y", "table": [["0", "a"], ...]}},
      "windows": {"W": {"pairs": [[x, y], ...]},
                  "B": {"ball_product": {"x_center": x, "x_radius": "1/2", "y_center": y,
                                         "y_radius": "1/2", "closed": false, "map": "F"}}},
      "sets":      {"V": [...], "Gamma": [...], "Lambda": [...], "U": [...]},
      "gamma":     {"kind": "constant", "value": "1/2"} | {"kind": "milyutin"} | {"kind": "table", "table": [[x, v], ...]},
      "constants": {"kappa": "1", "kappa_hat": "inf", ...},
      "center":    [xbar, zbar, wbar],
      "phi":       [[x, v], ...],  "start": x
    }

A ball product with ``"map"`` set takes its target candidates from the range
of that mapping; otherwise from the enumerated sample of the space.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .extnum import ext, is_inf, rational, to_str
from .maps import SetValuedMap, SingleValuedMap
from .regularity import GammaFunction, Window, ball_window
from .spaces import ExplicitSpace, LinearSpace, ProductSpace, Space, sorted_points


def encode(obj: Any) -> Any:
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, Fraction):
        return to_str(obj)
    if isinstance(obj, float):
        if is_inf(obj):
            return "inf"
        raise TypeError(f"refusing to encode inexact float {obj!r}")
    if isinstance(obj, dict):
        return {_key(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return [encode(p) for p in sorted_points(obj)]
    if isinstance(obj, (list, tuple)):
        return [encode(p) for p in obj]
    if isinstance(obj, Window):
        return {"pairs": encode(obj.sorted_pairs())}
    if isinstance(obj, SetValuedMap):
        return {"graph": encode(obj.sorted_graph())}
    if isinstance(obj, GammaFunction):
        return encode_gamma(obj)
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    raise TypeError(f"cannot encode {type(obj).__name__}")


def _key(k) -> str:
    enc = encode(k)
    return enc if isinstance(enc, str) else json.dumps(enc, sort_keys=True)


def dumps(obj: Any) -> str:
    return json.dumps(encode(obj), sort_keys=True, indent=2)


# decoding -------------------------------------------------------------------


def decode_space(spec: dict) -> Space:
    kind = spec.get("kind")
    if kind == "explicit":
        points = [_explicit_point(p) for p in spec["points"]]
        return ExplicitSpace(points, spec["dist"])
    if kind == "linear":
        dim = int(spec.get("dim", 1))
        return LinearSpace(dim, spec.get("norm", "linf"), spec.get("sample", ()))
    raise ValueError(f"unknown space kind {kind!r}")


def _explicit_point(p):
    if isinstance(p, list):
        return tuple(_explicit_point(c) for c in p)
    return p


def decode_point(space: Space, p):
    if isinstance(space, LinearSpace):
        return space.coerce(p)
    if isinstance(space, ProductSpace):
        return (decode_point(space.base_x, p[0]), decode_point(space.base_y, p[1]))
    return space.check_point(_explicit_point(p))


def encode_space(space: Space) -> dict:
    if isinstance(space, LinearSpace):
        return {"kind": "linear", "dim": space.dim, "norm": space.norm, "sample": encode(list(space.sample))}
    if isinstance(space, ExplicitSpace):
        return {"kind": "explicit", "points": encode(list(space.points)), "dist": encode(space.dist)}
    raise TypeError(f"cannot encode space {space!r}")


def encode_gamma(gamma: GammaFunction) -> dict:
    if gamma.kind == "constant":
        return {"kind": "constant", "value": encode(gamma.constant)}
    if gamma.kind == "table":
        return {"kind": "table", "table": encode(sorted_points(gamma.table.items()))}
    return {"kind": gamma.kind}


@dataclass
class Instance:
    spaces: dict
    maps: dict = field(default_factory=dict)
    windows: dict = field(default_factory=dict)
    sets: dict = field(default_factory=dict)
    constants: dict = field(default_factory=dict)
    center: tuple | None = None
    gamma: GammaFunction | None = None
    phi: dict | None = None
    start: Any = None

    def map(self, name: str):
        if name not in self.maps:
            raise ValueError(f"instance has no mapping {name!r}")
        return self.maps[name]

    def window(self, name: str = "W") -> Window:
        if name not in self.windows:
            raise ValueError(f"instance has no window {name!r}")
        return self.windows[name]


def _space_named(spaces: dict, name: str) -> Space:
    if name not in spaces:
        raise ValueError(f"unknown space {name!r}")
    return spaces[name]


def decode_instance(data: dict) -> Instance:
    if not isinstance(data, dict) or "spaces" not in data:
        raise ValueError("instance JSON must be an object with a 'spaces' entry")
    spaces = {name: decode_space(spec) for name, spec in data["spaces"].items()}
    default_x = "X" if "X" in spaces else next(iter(spaces))
    default_y = "Y" if "Y" in spaces else default_x
    maps: dict = {}
    for name, spec in data.get("maps", {}).items():
        X = _space_named(spaces, spec.get("domain", default_x))
        Y = _space_named(spaces, spec.get("target", default_y))
        if "graph" in spec:
            maps[name] = SetValuedMap(X, Y, ((decode_point(X, x), decode_point(Y, y)) for x, y in spec["graph"]))
        elif "table" in spec:
            maps[name] = SingleValuedMap(X, Y, {decode_point(X, x): decode_point(Y, y) for x, y in spec["table"]})
        else:
            raise ValueError(f"mapping {name!r} needs 'graph' or 'table'")
    X, Y = spaces[default_x], spaces[default_y]
    windows = {}
    for name, spec in data.get("windows", {}).items():
        windows[name] = _decode_window(spec, X, Y, maps)
    sets = {}
    for name, pts in data.get("sets", {}).items():
        space = X if name in ("U",) else Y
        sets[name] = frozenset(decode_point(space, p) for p in pts)
    constants = {k: ext(v) for k, v in data.get("constants", {}).items()}
    center = None
    if data.get("center") is not None:
        c = data["center"]
        center = (decode_point(X, c[0]),) + tuple(decode_point(Y, p) for p in c[1:])
    gamma = _decode_gamma(data["gamma"], X) if "gamma" in data else None
    phi = None
    if "phi" in data:
        phi = {decode_point(X, x): ext(v) for x, v in data["phi"]}
    start = decode_point(X, data["start"]) if "start" in data else None
    return Instance(spaces, maps, windows, sets, constants, center, gamma, phi, start)


def _decode_window(spec: dict, X: Space, Y: Space, maps: dict) -> Window:
    if "pairs" in spec:
        return Window((decode_point(X, x), decode_point(Y, y)) for x, y in spec["pairs"])
    if "ball_product" in spec:
        b = spec["ball_product"]
        y_cands = None
        if b.get("map"):
            if b["map"] not in maps:
                raise ValueError(f"window refers to unknown mapping {b['map']!r}")
            y_cands = sorted_points(maps[b["map"]].rge)
        return ball_window(X, decode_point(X, b["x_center"]), ext(b["x_radius"]),
                           Y, decode_point(Y, b["y_center"]), ext(b["y_radius"]),
                           closed=bool(b.get("closed", False)), y_candidates=y_cands)
    raise ValueError("window needs 'pairs' or 'ball_product'")


def _decode_gamma(spec: dict, X: Space) -> GammaFunction:
    kind = spec.get("kind")
    if kind == "constant":
        return GammaFunction.const(spec["value"])
    if kind == "milyutin":
        return GammaFunction.milyutin()
    if kind == "table":
        return GammaFunction.from_table({decode_point(X, x): v for x, v in spec["table"]})
    raise ValueError(f"unknown gamma kind {kind!r}")


def load_instance(path: str) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return decode_instance(json.load(fh))


def encode_instance(spaces: dict, maps: dict, windows: dict | None = None, sets: dict | None = None,
                    constants: dict | None = None, center=None, gamma=None, phi=None, start=None) -> dict:
    """Inverse of :func:`decode_instance`; spaces are referenced by name."""
    names = {id(s): n for n, s in spaces.items()}
    out: dict = {"spaces": {n: encode_space(s) for n, s in spaces.items()}}
    out_maps = {}
    for name, m in (maps or {}).items():
        entry = {"domain": names[id(m.domain_space)], "target": names[id(m.target_space)]}
        if isinstance(m, SetValuedMap):
            entry["graph"] = encode(m.sorted_graph())
        else:
            entry["table"] = encode(sorted_points(m.table.items()))
        out_maps[name] = entry
    if out_maps:
        out["maps"] = out_maps
    if windows:
        out["windows"] = {n: encode(w) for n, w in windows.items()}
    if sets:
        out["sets"] = {n: encode(frozenset(s)) for n, s in sets.items()}
    if constants:
        out["constants"] = encode(constants)
    if center is not None:
        out["center"] = encode(list(center))
    if gamma is not None:
        out["gamma"] = encode_gamma(gamma)
    if phi is not None:
        out["phi"] = encode(sorted_points(phi.items()))
    if start is not None:
        out["start"] = encode(start)
    return out
