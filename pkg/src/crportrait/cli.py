"""Command-line front end.

    crportrait classify --roots "0; 1+1i; 2+2i"
    crportrait integral --coeffs "1; -2; 0"
    crportrait portrait --roots "0; 2i" --out fig.svg
    crportrait report --json --roots "0; 0; 1+i"

Exit status: 0 success, 2 bad input, 3 trace budget exhausted, 1 other failures.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from dataclasses import fields

from . import serialize
from .darboux import Absent, RationalIntegral, build_integral, rational_integral
from .equilibria import classify_all, global_consistency
from .errors import CommensurabilityUndecided, InputError, PortraitError, TraceBudgetExceeded
from .render import RenderOptions, render_portrait
from .system import HolomorphicSystem, from_roots, normalize
from .tolerances import Tolerances, env_name
from .topology import center_region_type, classify_portrait, separatrix_configuration

_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_REAL = re.compile(rf"^([+-]?{_NUM})$")
_IMAG = re.compile(rf"^([+-]?)({_NUM})?\*?i$")
_BOTH = re.compile(rf"^([+-]?{_NUM})([+-])({_NUM})?\*?i$")


def parse_complex(text: str) -> complex:
    """Parse ``a``, ``bi``, ``a+bi`` or ``a-bi``; ``i`` alone is 1i."""
    s = re.sub(r"\s+", "", text)
    if m := _REAL.match(s):
        return complex(float(m.group(1)), 0.0)
    if m := _IMAG.match(s):
        b = float(m.group(2)) if m.group(2) else 1.0
        return complex(0.0, -b if m.group(1) == "-" else b)
    if m := _BOTH.match(s):
        b = float(m.group(3)) if m.group(3) else 1.0
        return complex(float(m.group(1)), -b if m.group(2) == "-" else b)
    raise InputError(f"cannot parse complex literal {text!r}")


def parse_list(text: str) -> list[complex]:
    items = [t for t in re.split(r"[;,]", text) if t.strip()]
    if not items:
        raise InputError("empty list")
    return [parse_complex(t) for t in items]


def _flag(name: str) -> str:
    return "--" + env_name(name).lower().replace("_", "-")


def _add_common(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--roots", help='roots with repetition, e.g. "0; 1+1i; 2+2i"')
    src.add_argument("--coeffs", help='coefficients, highest degree first, e.g. "1; -2; 0"')
    p.add_argument("--lead", default="1", help="leading coefficient used with --roots (default 1)")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    g = p.add_argument_group("tolerances (also CRC_* environment variables)")
    for f in fields(Tolerances):
        typ = int if f.name in ("max_steps", "n_max") else float
        g.add_argument(_flag(f.name), dest="tol_" + f.name, type=typ, default=None, metavar="X")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="crportrait", description="Holomorphic polynomial phase portraits")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, hlp in (
        ("classify", "equilibria and the topological class"),
        ("integral", "Darboux and rational first integrals"),
        ("report", "full report"),
    ):
        _add_common(sub.add_parser(name, help=hlp))
    p = sub.add_parser("portrait", help="SVG phase portrait on the Poincaré disk")
    _add_common(p)
    p.add_argument("--out", required=True, help="output SVG file")
    p.add_argument("--no-levels", action="store_true", help="omit level curves of rational integrals")
    p.add_argument("--grid", type=int, default=600, help="contour grid resolution")
    return ap


def _tolerances(args) -> Tolerances:
    base = Tolerances.from_env(os.environ)
    return base.replace(**{f.name: getattr(args, "tol_" + f.name) for f in fields(Tolerances)})


def _system(args, tol: Tolerances) -> tuple[HolomorphicSystem, list[complex], complex]:
    if args.roots is not None:
        rts = parse_list(args.roots)
        lead = parse_complex(args.lead)
        return from_roots(rts, lead, tol), rts, lead
    coeffs = parse_list(args.coeffs)
    system = normalize(coeffs, tol)
    user = [system.user_point(r) for r in system.roots]
    lead = next(c for c in coeffs if c != 0)
    return system, user, lead


def _pt(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def build_report(system: HolomorphicSystem, user_roots, lead, tol: Tolerances, with_config: bool = True) -> dict:
    t0 = time.perf_counter()
    reports = classify_all(system, tol)
    eqs = []
    for r in reports:
        d = r.as_dict()
        d["user_location"] = _pt(system.user_point(r.location))
        eqs.append(d)
    verdict = global_consistency(reports, system.degree, tol)
    darboux = build_integral(system)
    try:
        rational = rational_integral(system, reports, tol).to_dict()
    except CommensurabilityUndecided as e:
        rational = {"form": "undecided", "reason": str(e)}
    rep = {
        "schema": serialize.SCHEMA,
        "input": {
            "user_roots": [_pt(z) for z in user_roots],
            "lead": _pt(lead),
            "normalized_roots": [_pt(z) for z in system.roots],
            "map": {"scale": _pt(system.normalization.scale), "shift": _pt(system.normalization.shift)},
        },
        "equilibria": eqs,
        "consistency": {
            "applicable": verdict.applicable,
            "passed": verdict.passed,
            "diagnostics": verdict.diagnostics,
        },
        "integral": {"darboux": darboux.to_dict(), "rational": rational},
    }
    if with_config:
        config = separatrix_configuration(system, tol, reports)
        rep["class"] = classify_portrait(config).value
        rep["centers"] = [
            {"index": i, "location": _pt(r.location), "type": center_region_type(config, i).value}
            for i, r in enumerate(reports)
            if r.is_center
        ]
        rep["configuration"] = config.to_dict()
    rep["timing"] = {"seconds": time.perf_counter() - t0}
    return rep


def _print_classify(rep: dict, out) -> None:
    for e in rep["equilibria"]:
        x, y = e["location"]
        extra = ", ".join(f"{k}={e[k]}" for k in ("stability", "rotation", "omega", "elliptic_sectors") if k in e)
        out.write(f"({x:g}, {y:g})  mult {e['multiplicity']}  {e['kind']}  {extra}\n")
    out.write(f"class: {rep['class']}\n")
    for c in rep.get("centers", []):
        out.write(f"center ({c['location'][0]:g}, {c['location'][1]:g}): {c['type']}\n")
    if rep["consistency"]["applicable"]:
        out.write(f"consistency: {'pass' if rep['consistency']['passed'] else 'FAIL'}\n")


def _print_integral(rep: dict, out) -> None:
    d = rep["integral"]["darboux"]
    out.write("darboux integral:\n")
    if d["form"] == "rational":
        _print_rational(d, out)
    else:
        for f in d["factors"]:
            if f["type"] == "power":
                a, b = f["center"]
                out.write(f"  ((x-{a:g})^2+(y-{b:g})^2)^{f['exponent']:.17g}\n")
            elif f["type"] == "angle":
                a, b = f["center"]
                out.write(f"  exp({f['coefficient']:.17g} * angle about ({a:g}, {b:g}))\n")
            else:
                out.write(f"  exp(N/D)  N={f['numerator']}  D={f['denominator']}\n")
    out.write(f"  ({d['equivalence']})\n")
    r = rep["integral"]["rational"]
    out.write("rational integral:\n")
    if r["form"] == "rational":
        _print_rational(r, out)
    else:
        out.write(f"  {r['form']}: {r['reason']}\n")
        if r.get("conjecture"):
            out.write("  note: conjectured to admit no rational integral; not decided here\n")


def _print_rational(r: dict, out) -> None:
    for c in r["circles"]:
        a, b = c["center"]
        out.write(f"  ((x-{a:g})^2+(y-{b:g})^2)^{c['exponent']}\n")
    if r["numerator"] is not None:
        out.write(f"  numerator   {r['numerator']}\n")
    if r["denominator"] is not None:
        out.write(f"  denominator {r['denominator']}\n")


def _error(code: int, exc: Exception) -> int:
    sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
    return code


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        tol = _tolerances(args)
        system, user, lead = _system(args, tol)
        if args.command == "integral":
            rep = build_report(system, user, lead, tol, with_config=False)
            if args.json:
                sys.stdout.write(serialize.dumps({"schema": rep["schema"], "integral": rep["integral"]}))
            else:
                _print_integral(rep, sys.stdout)
        elif args.command == "classify":
            rep = build_report(system, user, lead, tol)
            if args.json:
                keep = ("schema", "input", "equilibria", "consistency", "class", "centers")
                sys.stdout.write(serialize.dumps({k: rep[k] for k in keep}))
            else:
                _print_classify(rep, sys.stdout)
        elif args.command == "report":
            sys.stdout.write(serialize.dumps(build_report(system, user, lead, tol)))
        else:
            config = separatrix_configuration(system, tol)
            svg = render_portrait(system, config, RenderOptions(level_curves=not args.no_levels, grid=args.grid))
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(svg)
            if args.json:
                sys.stdout.write(serialize.dumps({"schema": serialize.SCHEMA, "out": args.out}))
    except InputError as e:
        return _error(2, e)
    except TraceBudgetExceeded as e:
        return _error(3, e)
    except PortraitError as e:
        return _error(1, e)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
