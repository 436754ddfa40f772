"""Command line front end.

Reports are JSON documents with sorted keys and the sections input,
hypotheses, groups, result and statistics. Exit codes: 0 for an
affirmative result, 1 for a negative or inconclusive one, 2 for usage and
parse errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import yaml

from .arith import PlaceSet
from .descent import HypothesisError, NormOneTorus, selmer_group, strict_weak_selmer
from .pencil.groups import condition_D, lemma_explicit_conditions, vertical_brauer_basis
from .pencil.model import Pencil, fiber
from .pencil.search import THREADS_ENV, SearchConfig, find_integral_point, verify_point
from .pencil.theorems import VARIANTS, ShapeError, theorem_check
from .torsor import DEFAULT_EFFORT, solve

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2
DEFAULT_HEIGHT = 128


class SpecError(ValueError):
    """A malformed surface description; carries the offending key and line."""

    def __init__(self, message: str, key: str = "", line: Optional[int] = None):
        self.key, self.line = key, line
        where = []
        if key:
            where.append(f"key '{key}'")
        if line is not None:
            where.append(f"line {line}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


@dataclass(frozen=True)
class SurfaceSpec:
    pencil: Pencil
    height: Optional[int] = None
    effort: Optional[int] = None
    variant: Optional[str] = None


# ------------------------------------------------------------------ parsing

def _lines(node) -> dict:
    """Line numbers (1-based) of the top-level and search keys of a YAML mapping."""
    out = {}
    if isinstance(node, yaml.MappingNode):
        for k, v in node.value:
            out[k.value] = k.start_mark.line + 1
            if k.value == "search" and isinstance(v, yaml.MappingNode):
                for k2, _ in v.value:
                    out[f"search.{k2.value}"] = k2.start_mark.line + 1
    return out


def _int(x, key: str, lines: dict) -> int:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise SpecError("expected an integer", key, lines.get(key.split("[")[0]))
    try:
        return int(x)
    except ValueError:
        raise SpecError(f"expected an integer, got {x!r}", key, lines.get(key.split("[")[0]))


def parse_spec_text(text: str) -> SurfaceSpec:
    try:
        node = yaml.compose(text)
        data = yaml.safe_load(text)
    except yaml.MarkedYAMLError as e:
        line = e.problem_mark.line + 1 if e.problem_mark else None
        raise SpecError(f"YAML syntax error: {e.problem}", "", line)
    if not isinstance(data, dict):
        raise SpecError("the spec must be a mapping")
    # a report echoes its input section, so reports parse as specs
    if "input" in data and "forms" not in data and isinstance(data["input"], dict):
        data = data["input"]
    return spec_from_dict(data, _lines(node))


def spec_from_dict(data: dict, lines: Optional[dict] = None) -> SurfaceSpec:
    lines = lines or {}
    known = {"s0", "a", "b", "forms", "partition_A", "search", "variant"}
    for k in data:
        if k not in known:
            raise SpecError("unknown key", str(k), lines.get(k))
    for k in ("s0", "a", "b", "forms", "partition_A"):
        if k not in data:
            raise SpecError("missing required key", k)
    s0 = data["s0"]
    if not isinstance(s0, list):
        raise SpecError("expected a list of places", "s0", lines.get("s0"))
    try:
        s0 = PlaceSet.of(str(v) for v in s0)
    except ValueError as e:
        raise SpecError(str(e), "s0", lines.get("s0"))
    forms = data["forms"]
    if not isinstance(forms, list) or not all(isinstance(f, list) and len(f) == 2 for f in forms):
        raise SpecError("expected a list of [c, d] pairs", "forms", lines.get("forms"))
    forms = [(_int(c, f"forms[{k}]", lines), _int(d, f"forms[{k}]", lines))
             for k, (c, d) in enumerate(forms)]
    part = data["partition_A"]
    if not isinstance(part, list):
        raise SpecError("expected a list of 1-based indices", "partition_A",
                        lines.get("partition_A"))
    idx = [_int(i, "partition_A", lines) for i in part]
    if any(i < 1 or i > len(forms) for i in idx) or len(set(idx)) != len(idx):
        raise SpecError("indices must be distinct and between 1 and the number of forms",
                        "partition_A", lines.get("partition_A"))
    a, b = _int(data["a"], "a", lines), _int(data["b"], "b", lines)
    try:
        pencil = Pencil(tuple(forms), {i - 1 for i in idx}, a, b, s0)
    except ValueError as e:
        raise SpecError(str(e), "forms")
    search = data.get("search") or {}
    if not isinstance(search, dict):
        raise SpecError("expected a mapping", "search", lines.get("search"))
    for k in search:
        if k not in ("height", "effort"):
            raise SpecError("unknown key", f"search.{k}", lines.get(f"search.{k}"))
    height = _int(search["height"], "search.height", lines) if "height" in search else None
    effort = _int(search["effort"], "search.effort", lines) if "effort" in search else None
    variant = data.get("variant")
    if variant is not None and variant not in VARIANTS:
        raise SpecError(f"unknown variant {variant!r}", "variant", lines.get("variant"))
    return SurfaceSpec(pencil, height, effort, variant)


def _inline_spec(ns) -> SurfaceSpec:
    missing = [f for f in ("forms", "partition_A", "a", "b", "s0") if getattr(ns, f) is None]
    if missing:
        raise SpecError("without --spec give --forms, --partition-A, --a, --b and --s0",
                        missing[0])
    try:
        forms = [[int(x) for x in f.split(",")] for f in ns.forms.split(";")]
        part = [int(x) for x in ns.partition_A.split(",") if x]
    except ValueError as e:
        raise SpecError(f"bad inline value: {e}", "forms")
    return spec_from_dict({"forms": forms, "partition_A": part, "a": ns.a, "b": ns.b,
                           "s0": ns.s0.split(",")})


def load_spec(ns) -> SurfaceSpec:
    if ns.spec:
        try:
            with open(ns.spec) as fh:
                text = fh.read()
        except OSError as e:
            raise SpecError(f"cannot read spec file: {e.strerror}", "--spec")
        return parse_spec_text(text)
    return _inline_spec(ns)


def _rational(x: str, key: str) -> Fraction:
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError):
        raise SpecError(f"expected a rational number, got {x!r}", key)


# ------------------------------------------------------------------ reports

def _report(inp: dict, result: dict, hypotheses=None, groups=None, stats=None) -> dict:
    return {"input": inp, "hypotheses": hypotheses or {}, "groups": groups or {},
            "result": result, "statistics": stats or {}}


def _labeled(sub, labels) -> list:
    return [[str(x) for x in b] for b in sub.with_labels(labels).labeled_basis()]


def cmd_check(spec: SurfaceSpec, variant: Optional[str]) -> tuple[dict, int]:
    P = spec.pencil
    variant = variant or spec.variant or "main_uncond"
    rep = theorem_check(P, variant)
    cd = condition_D(P)
    ec = lemma_explicit_conditions(P)
    vb = vertical_brauer_basis(P)
    groups = {
        "G_D": [x.to_json() for x in cd.GD],
        "G^D": [x.to_json() for x in cd.GDhat],
        "vertical_brauer_basis": [format(e, f"0{P.size}b")[::-1] for e in vb.basis],
    }
    result = {"variant": variant, "all_hold": rep.holds, "condition_D": cd.holds,
              "explicit": ec.to_json()}
    inp = P.to_json()
    inp["variant"] = variant
    hyps = rep.to_json()["hypotheses"]
    stats = {"delta": rep.extra["delta"], "G_D_size": len(cd.GD), "G^D_size": len(cd.GDhat)}
    return _report(inp, result, hyps, groups, stats), EXIT_OK if rep.holds else EXIT_NEGATIVE


def cmd_selmer(d: int, s0: PlaceSet, s1: Optional[PlaceSet]) -> tuple[dict, int]:
    t = NormOneTorus(d, s0)
    if s1 is not None and len(s1):
        rep = strict_weak_selmer(t, s1)
    else:
        rep = selmer_group(t)
    labels = rep.labels
    groups = {"labels": [str(x) for x in labels],
              "selmer": _labeled(rep.selmer, labels),
              "dual_selmer": _labeled(rep.dual_selmer, labels)}
    if rep.strict_selmer is not None and rep.s1:
        groups["strict_selmer"] = _labeled(rep.strict_selmer, labels)
        groups["weak_dual_selmer"] = _labeled(rep.weak_dual_selmer, labels)
    result = {"dim_selmer": rep.selmer.rank, "dim_dual_selmer": rep.dual_selmer.rank,
              "dual_generated_by_d": rep.dual_selmer.rank == 1,
              "split_places": [str(v) for v in rep.split_places],
              "S": rep.s.to_json()}
    if "strict_selmer" in groups:
        result["dim_strict_selmer"] = rep.strict_selmer.rank
        result["dim_weak_dual_selmer"] = rep.weak_dual_selmer.rank
    hyps = {"base_assumption": {"holds": t.assumption_holds(),
                                "violations": [str(v) for v in t.violations()]}}
    inp = {"d": d, "s0": s0.to_json(), "s1": s1.to_json() if s1 is not None else []}
    return _report(inp, result, hyps, groups), EXIT_OK


def cmd_solve_fiber(spec: SurfaceSpec, t: int, s: int, effort: int) -> tuple[dict, int]:
    P = spec.pencil
    z = fiber(P, t, s)
    res = solve(z, effort)
    result = {"t": t, "s": s, "fiber": {"a": z.a, "b": z.b}, **res.to_json()}
    if res.found:
        result["verified"] = verify_point(P, t, s, res.x, res.y)
    inp = P.to_json()
    inp["search"] = {"effort": effort}
    return _report(inp, result, stats=dict(sorted(res.stats.items()))), \
        EXIT_OK if res.found else EXIT_NEGATIVE


def cmd_find_point(spec: SurfaceSpec, height: int, effort: int, threads: int) -> tuple[dict, int]:
    P = spec.pencil
    out = find_integral_point(P, SearchConfig(height, effort, threads))
    result = out.to_json()
    if out.found:
        result["verified"] = verify_point(P, out.t, out.s, out.result.x, out.result.y)
    inp = P.to_json()
    inp["search"] = {"height": height, "effort": effort}
    return _report(inp, result, stats=out.stats), EXIT_OK if out.found else EXIT_NEGATIVE


def _lhs(P: Pencil, t, s, x, y) -> Fraction:
    def ev(J):
        out = Fraction(1)
        for i, (c, d) in enumerate(P.forms):
            if J >> i & 1:
                out *= c * t + d * s
        return out
    return P.a * ev(P.A) * x * x + P.b * ev(P.B) * y * y


def cmd_verify(spec: SurfaceSpec, t, s, x, y) -> tuple[dict, int]:
    P = spec.pencil
    ok = verify_point(P, t, s, x, y)
    result = {"valid": ok, "t": str(t), "s": str(s), "x": str(x), "y": str(y),
              "residual": str(_lhs(P, t, s, x, y) - 1)}
    return _report(P.to_json(), result), EXIT_OK if ok else EXIT_NEGATIVE


# --------------------------------------------------------------------- main

def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="conic-descent", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, surface=True):
        fmt = p.add_mutually_exclusive_group()
        fmt.add_argument("--json", dest="pretty", action="store_false",
                         help="compact JSON output (default)")
        fmt.add_argument("--pretty", dest="pretty", action="store_true",
                         help="indented JSON output")
        p.set_defaults(pretty=False)
        if surface:
            p.add_argument("--spec", help="YAML or JSON surface description")
            p.add_argument("--forms", help="inline forms, e.g. '1,4;2,5;3,2;5,1'")
            p.add_argument("--partition-A", dest="partition_A", help="1-based indices, e.g. '1,2'")
            p.add_argument("--a", type=int)
            p.add_argument("--b", type=int)
            p.add_argument("--s0", help="places, e.g. 'inf,2'")

    p = sub.add_parser("check", help="check the hypotheses of a theorem variant")
    common(p)
    p.add_argument("--variant", choices=VARIANTS)

    p = sub.add_parser("selmer", help="Selmer groups of x^2 - d y^2 = 1")
    common(p, surface=False)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--s0", required=True, help="places, e.g. 'inf,2'")
    p.add_argument("--s1", default="", help="parity places for the strict/weak variant")

    p = sub.add_parser("solve-fiber", help="solve one fiber")
    common(p)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--effort", type=int)

    p = sub.add_parser("find-point", help="search fibers by height")
    common(p)
    p.add_argument("--height", type=int)
    p.add_argument("--effort", type=int)
    p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("verify", help="check a point exactly")
    common(p)
    p.add_argument("--report", help="a find-point report to re-check")
    for k in ("t", "s", "x", "y"):
        p.add_argument(f"--{k}")
    return ap


def _emit(doc: dict, pretty: bool, out) -> None:
    if pretty:
        text = json.dumps(doc, sort_keys=True, indent=2)
    else:
        text = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    out.write(text + "\n")


def _error(message: str, out, pretty: bool, **extra) -> int:
    _emit({"error": {"message": message, **extra}}, pretty, out)
    return EXIT_USAGE


def run(argv: list[str], out=None) -> int:
    out = out or sys.stdout
    ap = _parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    pretty = bool(getattr(ns, "pretty", False))
    try:
        doc, code = _dispatch(ns)
    except SpecError as e:
        return _error(str(e), out, pretty, key=e.key, line=e.line)
    except (ShapeError, HypothesisError, ValueError) as e:
        return _error(str(e), out, pretty, kind=type(e).__name__)
    _emit(doc, pretty, out)
    return code


def _dispatch(ns) -> tuple[dict, int]:
    if ns.command == "selmer":
        s1 = PlaceSet.of(x for x in ns.s1.split(",") if x) if ns.s1 else None
        return cmd_selmer(ns.d, PlaceSet.of(ns.s0.split(",")), s1)
    if ns.command == "verify" and ns.report:
        spec = load_spec(argparse.Namespace(spec=ns.report))
        with open(ns.report) as fh:
            res = json.load(fh).get("result", {})
        if "x" not in res:
            raise SpecError("report has no point to verify", "result")
        return cmd_verify(spec, *(_rational(str(res[k]), k) for k in ("t", "s", "x", "y")))
    spec = load_spec(ns)
    if ns.command == "check":
        return cmd_check(spec, ns.variant)
    effort = getattr(ns, "effort", None) or spec.effort or DEFAULT_EFFORT
    if ns.command == "solve-fiber":
        return cmd_solve_fiber(spec, ns.t, ns.s, effort)
    if ns.command == "find-point":
        height = ns.height or spec.height or DEFAULT_HEIGHT
        threads = ns.threads
        env = os.environ.get(THREADS_ENV)
        if env:
            try:
                threads = int(env)
            except ValueError:
                raise SpecError(f"{THREADS_ENV} must be an integer", THREADS_ENV)
        return cmd_find_point(spec, height, effort, threads)
    vals = [getattr(ns, k) for k in ("t", "s", "x", "y")]
    if any(v is None for v in vals):
        raise SpecError("verify needs --t, --s, --x and --y (or --report)", "verify")
    return cmd_verify(spec, *(_rational(v, k) for v, k in zip(vals, "tsxy")))


def main(argv: Optional[list[str]] = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)
