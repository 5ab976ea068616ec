"""Command-line entry point.

Exit codes: 0 when the checked property holds (or an artifact was written),
1 when it fails (the witness is printed), 2 on malformed input or usage.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction

from . import criteria, gallery, perturb, regularity as reg
from .evp import EvpInstance, evp_path, evp_verify
from .extnum import display, ext, is_inf
from .maps import SingleValuedMap
from .serialize import Instance, decode_instance, decode_point, dumps, encode, encode_instance
from .spaces import validate_metric

PROPERTIES = ("regular", "restricted-regular", "strong-regular", "gamma-regular", "milyutin",
              "semiregular", "aubin", "hausdorff-lipschitz", "lipschitz", "sum-stable", "coincidence")
VARIANTS = ("single", "graph", "dist-graph", "gamma", "semireg-graph", "semireg-dist")
GALLERY = ("two-lines", "sum-failure", "random", "linear-perturbation")


class UsageError(Exception):
    pass


def _positive(text: str) -> Fraction:
    try:
        value = ext(text)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from exc
    if not value > 0 or is_inf(value):
        raise argparse.ArgumentTypeError(f"expected a positive rational, got {text!r}")
    return value


def _extended(text: str):
    try:
        value = ext(text)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact value: {text!r}") from exc
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive value, got {text!r}")
    return value


def _const(text: str):
    if "=" not in text:
        raise argparse.ArgumentTypeError("constants are given as name=value")
    name, value = text.split("=", 1)
    try:
        return name.strip(), ext(value)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad constant {text!r}") from exc


def _jobs(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("--jobs must be at least 1")
    return n


# instance loading -------------------------------------------------------------

_CALL = re.compile(r"^\s*([a-z_-]+)\s*\((.*)\)\s*$")


def gallery_instance(name: str, args: list[str]) -> gallery.GalleryInstance:
    key = name.replace("_", "-")
    try:
        if key == "two-lines":
            return gallery.two_lines(*args)
        if key == "sum-failure":
            return gallery.sum_failure(*args)
        if key == "linear-perturbation":
            return gallery.linear_perturbation(*args)
        if key == "random":
            seed = int(args[0])
            sizes = [int(a) for a in args[1:3]] + [12, 3][len(args[1:3]):]
            return gallery.random_instance(seed, tuple(sizes))
    except TypeError as exc:
        raise UsageError(f"bad parameters for gallery instance {name!r}: {exc}") from None
    raise UsageError(f"unknown gallery instance {name!r}")


def gallery_as_instance(g: gallery.GalleryInstance) -> Instance:
    maps = dict(g.maps)
    spaces = {"X": g.X, "Y": g.Y}
    windows = dict(g.windows)
    if g.name == "sum-failure":
        windows.setdefault("W", windows[min(windows, key=lambda k: len(windows[k]))])
    return Instance(spaces, maps, windows, {}, dict(g.constants), g.center, None,
                    g.extra.get("phi"), g.extra.get("start"))


def load(spec: str) -> Instance:
    m = _CALL.match(spec)
    if m and not os.path.exists(spec):
        args = [a.strip() for a in m.group(2).split(",") if a.strip()]
        return gallery_as_instance(gallery_instance(m.group(1), args))
    try:
        with open(spec, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read instance {spec!r}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {spec!r}: {exc}") from None
    return decode_instance(data)


def _set(inst: Instance, name: str | None, space):
    if name is None:
        return None
    if name in inst.sets:
        return inst.sets[name]
    raise UsageError(f"instance has no set {name!r}")


def _point(inst: Instance, text: str | None, space_name="X"):
    if text is None:
        return None
    space = inst.spaces.get(space_name) or next(iter(inst.spaces.values()))
    try:
        value = json.loads(text)
    except json.JSONDecodeError:
        value = text
    return decode_point(space, value)


def _split_pair(text: str):
    if text.lstrip().startswith("["):
        parts = json.loads(text)
    else:
        parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"--pair expects X,Y; got {text!r}")
    return [p if isinstance(p, str) else json.dumps(p) for p in parts]


def _window(inst: Instance, args) -> reg.Window:
    if getattr(args, "pair", None):
        x, y = _split_pair(args.pair)
        return reg.Window([(_point(inst, x, "X"), _point(inst, y, "Y" if "Y" in inst.spaces else "X"))])
    return inst.window(args.window)


def _require(value, flag: str):
    if value is None:
        raise UsageError(f"{flag} is required here")
    return value


# subcommands --------------------------------------------------------------


def cmd_verify(args, inst: Instance):
    F = inst.map(args.map)
    p = args.property
    if p == "regular":
        return reg.check_regular(F, _window(inst, args), _require(args.kappa, "--kappa"), args.jobs)
    if p == "restricted-regular":
        V = _set(inst, _require(args.set, "--set"), "Y")
        return reg.check_restricted_regular(F, _window(inst, args), V, _require(args.kappa, "--kappa"))
    if p == "strong-regular":
        return reg.check_strong_regular(F, _window(inst, args), _require(args.kappa, "--kappa"))
    if p in ("gamma-regular", "milyutin"):
        gamma = reg.GammaFunction.milyutin() if p == "milyutin" else _require(inst.gamma, "a gamma entry")
        return reg.check_gamma_regular(F, _window(inst, args), gamma, _require(args.kappa, "--kappa"),
                                       args.variant, args.delta)
    if p == "semiregular":
        xbar = _require(_point(inst, args.xbar), "--xbar")
        Gamma = _set(inst, _require(args.gamma_set, "--gamma-set"), "Y")
        Lam = _set(inst, args.set, "Y") if args.set else F(xbar)
        return reg.check_semiregular(F, xbar, Gamma, Lam, _require(args.kappa, "--kappa"))
    if p in ("aubin", "hausdorff-lipschitz"):
        U = _set(inst, args.domain_set, "X") if args.domain_set else F.domain_space.enumerate()
        V = _set(inst, args.set, "Y") if (p == "aubin" and args.set) else None
        v = reg.check_aubin(F, U, V, _require(args.ell, "--ell"))
        if p == "hausdorff-lipschitz":
            v.property = p
        return v
    if p == "lipschitz":
        if not isinstance(F, SingleValuedMap):
            raise UsageError(f"--property lipschitz needs a single-valued map (a 'table'), not {args.map!r}")
        U = _set(inst, args.domain_set, "X") if args.domain_set else F.dom
        return reg.lipschitz_check(F, U, _require(args.ell, "--ell"))
    if p == "sum-stable":
        G = inst.map(args.other)
        levels = [(a, a) for a in (args.levels or [])]
        return reg.check_sum_stable(F, G, _require(inst.center, "a center entry"), levels)
    if p == "coincidence":
        G = inst.map(args.other)
        return reg.coincidence_bound(F, G, _require(_point(inst, args.xbar), "--xbar"),
                                     _require(args.kappa, "--kappa"))
    raise UsageError(f"unknown property {p!r}")


def cmd_modulus(args, inst: Instance):
    F = inst.map(args.map)
    value, where = reg.modulus_with_witness(F, _window(inst, args))
    return {"modulus": value, "attained_at": where}


def cmd_evp(args, inst: Instance):
    space = inst.spaces[args.space]
    phi = _require(inst.phi, "a phi entry")
    start = _point(inst, args.start, args.space) if args.start else _require(inst.start, "a start point")
    evp = EvpInstance(space, phi, start, args.scale)
    path = evp_path(evp)
    v = evp_verify(evp, path[-1])
    v.notes.update({"path": path, "steps": len(path) - 1})
    return v


def cmd_criterion(args, inst: Instance):
    F = inst.map(args.map)
    k = _require(args.kappa, "--kappa")
    variant = args.variant
    common = {"check_conclusion": True, "raise_on_unsound": False}
    if variant == "single":
        return criteria.criterion_single(F, _window(inst, args), _set(inst, _require(args.set, "--set"), "Y"),
                                         k, **common)
    if variant == "graph":
        return criteria.criterion_graph_restricted(F, _window(inst, args), _set(inst, _require(args.set, "--set"), "Y"),
                                                   k, _require(args.lam, "--lambda"), **common)
    if variant == "semireg-graph":
        return criteria.criterion_semireg_graph(F, _require(_point(inst, args.xbar), "--xbar"),
                                                _set(inst, _require(args.gamma_set, "--gamma-set"), "Y"),
                                                _set(inst, _require(args.set, "--set"), "Y"),
                                                k, _require(args.lam, "--lambda"), **common)
    kh = _require(args.kappa_hat, "--kappa-hat")
    if variant == "dist-graph":
        return criteria.criterion_dist_graph(F, _window(inst, args), k, kh, args.omega_weight, **common)
    if variant == "gamma":
        gamma = inst.gamma or reg.GammaFunction.milyutin()
        return criteria.criterion_gamma_graph(F, _window(inst, args), gamma, k, kh, args.omega_weight, **common)
    if variant == "semireg-dist":
        return criteria.criterion_semireg_dist(F, _require(_point(inst, args.xbar), "--xbar"),
                                               _set(inst, _require(args.gamma_set, "--gamma-set"), "Y"),
                                               k, kh, args.omega_weight, **common)
    raise UsageError(f"unknown variant {variant!r}")


def cmd_perturb(args, inst: Instance):
    constants = dict(inst.constants)
    constants.update(dict(args.const or []))
    G = inst.maps.get("G")
    g = inst.maps.get("g")
    pi = perturb.PerturbInstance(inst.map("F"), _require(inst.center, "a center entry"), constants, G=G, g=g,
                                 Omega=inst.windows.get("Omega"), gamma=inst.gamma,
                                 U=inst.sets.get("U"), V=inst.sets.get("V"),
                                 q_candidates=inst.sets.get("Q"))
    return perturb.run_experiment(args.theorem, pi, args.jobs)


def cmd_gallery(args):
    params = list(args.params or [])
    g = gallery_instance(args.name, params)
    inst = gallery_as_instance(g)
    return encode_instance(inst.spaces, inst.maps, inst.windows, None, inst.constants, inst.center,
                           None, inst.phi, inst.start)


def cmd_validate(args, inst: Instance):
    return validate_metric(inst.spaces[args.space])


# output -------------------------------------------------------------------


def _holds(result) -> bool:
    if isinstance(result, criteria.CriterionReport):
        return result.hypothesis_holds and result.sound and (
            result.conclusion_checked is None or result.conclusion_checked.holds)
    if isinstance(result, perturb.ExperimentReport):
        return result.holds
    if isinstance(result, dict):
        return True
    return result.holds


def _text(result) -> str:
    data = encode(result)
    lines = []

    def walk(prefix, obj):
        if isinstance(obj, dict):
            for k in sorted(obj):
                walk(f"{prefix}{k}.", obj[k])
        elif isinstance(obj, list) and obj and all(not isinstance(o, (dict, list)) for o in obj):
            lines.append(f"{prefix[:-1]}: {', '.join(_show(o) for o in obj)}")
        elif isinstance(obj, list):
            for i, o in enumerate(obj):
                walk(f"{prefix}{i}.", o)
        else:
            lines.append(f"{prefix[:-1]}: {_show(obj)}")
    walk("", data)
    return "\n".join(lines) + "\n(numbers shown to 6 significant digits for display only)"


def _show(value) -> str:
    if isinstance(value, str) and re.fullmatch(r"-?\d+/\d+", value):
        num = Fraction(value)
        return f"{value} (~{display(abs(num)) if num >= 0 else '-' + display(-num)})"
    return str(value)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="metreg", description="Exact finite checks for metric regularity.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, instance=True):
        if instance:
            p.add_argument("--instance", required=True, help="JSON path or gallery call, e.g. two_lines(1/4,1/4,1/20)")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--jobs", type=_jobs, default=os.cpu_count() or 1)

    def selectors(p):
        p.add_argument("--map", default="F")
        p.add_argument("--window", default="W")
        p.add_argument("--pair", metavar="X,Y",
                       help="check the singleton window {(X, Y)}; write --pair=-1/2,1 for negative X")

    p = sub.add_parser("verify", help="definition-level regularity checks")
    common(p)
    selectors(p)
    p.add_argument("--property", choices=PROPERTIES, required=True)
    p.add_argument("--kappa", type=_positive)
    p.add_argument("--ell", type=_positive)
    p.add_argument("--delta", type=_positive)
    p.add_argument("--variant", choices=("A", "B"), default="A")
    p.add_argument("--set", help="name of the target set V or Lambda")
    p.add_argument("--gamma-set", help="name of the target set Gamma")
    p.add_argument("--domain-set", help="name of the domain set U")
    p.add_argument("--xbar")
    p.add_argument("--other", default="G")
    p.add_argument("--levels", type=_extended, nargs="*")

    p = sub.add_parser("modulus", help="least regularity constant on a window")
    common(p)
    selectors(p)

    p = sub.add_parser("evp", help="variational principle descent and verification")
    common(p)
    p.add_argument("--space", default="X")
    p.add_argument("--start")
    p.add_argument("--scale", type=_positive, default=Fraction(1))

    p = sub.add_parser("criterion", help="sufficient-condition checks")
    common(p)
    selectors(p)
    p.add_argument("--variant", choices=VARIANTS, required=True)
    p.add_argument("--kappa", type=_positive)
    p.add_argument("--kappa-hat", type=_positive)
    p.add_argument("--lambda", dest="lam", type=_positive)
    p.add_argument("--omega-weight", choices=criteria.OMEGA_WEIGHTS, default="kappa")
    p.add_argument("--set")
    p.add_argument("--gamma-set")
    p.add_argument("--xbar")

    p = sub.add_parser("perturb", help="stability experiments")
    common(p)
    p.add_argument("--theorem", choices=perturb.THEOREMS + perturb.REMARKS, required=True)
    p.add_argument("--const", type=_const, action="append", help="override a constant, name=value")

    p = sub.add_parser("gallery", help="emit a built-in instance as JSON")
    common(p, instance=False)
    p.add_argument("--name", choices=GALLERY, required=True)
    p.add_argument("--params", nargs="*", help="positional parameters, e.g. 1/4 1/4 1/20")

    p = sub.add_parser("validate", help="check the metric axioms")
    common(p)
    p.add_argument("--space", default="X")
    return parser


_COMMANDS = {"verify": cmd_verify, "modulus": cmd_modulus, "evp": cmd_evp, "criterion": cmd_criterion,
             "perturb": cmd_perturb, "validate": cmd_validate}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "gallery":
            result = cmd_gallery(args)
        else:
            inst = load(args.instance)
            result = _COMMANDS[args.command](args, inst)
    except (UsageError, ValueError, TypeError, KeyError, IndexError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.format == "json":
        print(dumps(result))
    else:
        print(_text(result))
    return 0 if _holds(result) else 1


if __name__ == "__main__":
    sys.exit(main())
