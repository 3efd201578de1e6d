"""Batch command line: one JSON document in, one JSON document out.

Usage::

    toruskit <command> --in INPUT [--out PATH] [--opt key=value ...]

``INPUT`` is a file path, ``-`` for standard input, or inline JSON. Caps
can also be overridden for every run through ``TORUSKIT_CAPS``, for
example ``TORUSKIT_CAPS="multiple_cap=32,m_max=10"``; ``--opt`` wins over
the environment. Exit status is 0 on success and 2 on any parse or domain
error, in which case the document has an ``error`` object with a code.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import serialize as ser
from .cones import DEFAULT_MULTIPLE_CAP, is_saturated_at_vertex, smallest_good_multiple
from .errors import ToruskitError
from .heights import (DEFAULT_EXPONENT_CAP, LogValue, boundary_components, boundary_distance,
                      detect_coset_families, enumerate_integral_points, height, weil_function,
                      weil_lower_bound)
from .newton import dilate, faces, lattice_points, newton_polytope, ueno_stabilizer
from .resolve import DEFAULT_INSERTION_CAP, log_canonical_boundary, resolve_to_smooth
from .sections import DEFAULT_M_MAX, d_dimension, log_kodaira_dimension
from .toricfan import (completion_fan, divisor_closure, equivariant_projection, is_ample,
                       orbit_avoidance, orbit_table)

CAP_DEFAULTS = {
    "multiple_cap": DEFAULT_MULTIPLE_CAP,
    "insertion_cap": DEFAULT_INSERTION_CAP,
    "exponent_cap": DEFAULT_EXPONENT_CAP,
    "m_max": DEFAULT_M_MAX,
}

# options each command accepts, besides nothing at all
OPTIONS = {
    "newton": set(),
    "ueno": set(),
    "saturate": {"multiple_cap"},
    "fan": set(),
    "ample": set(),
    "resolve": {"insertion_cap"},
    "kappa": {"m_max"},
    "logkappa": {"m_max", "cross_check"},
    "project": set(),
    "height": set(),
    "weil": set(),
    "distance": set(),
    "enumerate": {"height", "exponent_cap"},
    "families": {"height", "exponent_cap"},
}

DEFAULT_HEIGHT = 1024


def _env_caps() -> dict:
    raw = os.environ.get("TORUSKIT_CAPS", "").strip()
    caps = dict(CAP_DEFAULTS)
    if not raw:
        return caps
    for item in raw.split(","):
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in CAP_DEFAULTS:
            raise ser.ParseError(f"bad TORUSKIT_CAPS entry {item!r}")
        caps[key] = _positive_int(key, value)
    return caps


def _positive_int(key, value) -> int:
    try:
        n = int(str(value).strip())
    except ValueError:
        raise ser.ParseError(f"option {key} needs an integer") from None
    if n < 1:
        raise ser.ParseError(f"option {key} must be positive")
    return n


def _options(command: str, pairs) -> dict:
    opts = _env_caps()
    for pair in pairs or ():
        key, sep, value = pair.partition("=")
        if not sep:
            raise ser.ParseError(f"option {pair!r} is not key=value")
        if key not in OPTIONS[command]:
            raise ser.ParseError(f"unknown option {key!r} for {command}")
        if key in CAP_DEFAULTS:
            opts[key] = _positive_int(key, value)
        elif key == "cross_check":
            if value not in ("true", "false"):
                raise ser.ParseError("cross_check is true or false")
            opts[key] = value == "true"
        elif key == "height":
            try:
                h = Fraction(value)
            except (ValueError, ZeroDivisionError):
                raise ser.ParseError("height needs a positive rational") from None
            if h < 1:
                raise ser.ParseError("height must be at least 1")
            opts[key] = h
    return opts


def _read_input(source: str) -> dict:
    if source == "-":
        text = sys.stdin.read()
    elif source.lstrip().startswith("{"):
        text = source
    else:
        try:
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ser.ParseError(f"cannot read {source}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ser.ParseError(f"invalid JSON: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ser.ParseError("input must be a JSON object")
    return doc


def _shape(doc):
    if "polynomial" in doc:
        return newton_polytope(ser.polynomial_from_json(doc["polynomial"]))
    return ser.polytope_from_json(doc["polytope"])


def _cmd_newton(doc, opts):
    p = _shape(doc)
    return {
        "rank": p.rank,
        "dim": p.dim,
        "vertices": [list(v) for v in p.vertices],
        "facets": [{"normal": list(u), "offset": b} for u, b, _ in p.facets],
        "faces": [{"dim": d.dim, "vertices": [list(v) for v in d.vertices]} for d in faces(p)],
        "lattice_point_count": len(lattice_points(p)),
    }


def _cmd_ueno(doc, opts):
    basis = ueno_stabilizer(ser.polynomial_from_json(doc["polynomial"]))
    return {"rank": len(basis), "basis": [list(b) for b in basis], "trivial": not basis}


def _cmd_saturate(doc, opts):
    p = _shape(doc)
    n = smallest_good_multiple(p, opts["multiple_cap"])
    q = dilate(p, n)
    verts = [{"vertex": list(v), "saturated_at_multiple": is_saturated_at_vertex(q, tuple(n * x for x in v))}
             for v in p.vertices]
    return {"multiple": n, "cap": opts["multiple_cap"], "vertices": verts}


def _cmd_fan(doc, opts):
    p = _shape(doc)
    fan = completion_fan(p)
    orbits = [{"face": [list(v) for v in o.face.vertices], "dim": o.dim,
               "character_basis": [list(b) for b in o.character_basis]} for o in orbit_table(p)]
    return {"fan": ser.fan_to_json(fan), "complete": fan.is_complete(), "smooth": fan.is_smooth(),
            "orbits": orbits}


def _cmd_ample(doc, opts):
    f = ser.polynomial_from_json(doc["polynomial"])
    fan = ser.fan_from_json(doc["fan"]) if "fan" in doc else completion_fan(newton_polytope(f))
    d = divisor_closure(f, fan)
    return {"divisor": ser.divisor_to_json(d), "cartier": d.is_cartier(), "ample": is_ample(d),
            "orbit_avoidance": orbit_avoidance(f)}


def _cmd_resolve(doc, opts):
    fan = ser.fan_from_json(doc["fan"]) if "fan" in doc else completion_fan(_shape(doc))
    sub = resolve_to_smooth(fan, opts["insertion_cap"])
    trivial = log_canonical_boundary(sub.target).is_trivial if sub.target.is_complete() else None
    return {"subdivision": ser.subdivision_to_json(sub), "smooth": sub.target.is_smooth(),
            "log_canonical_trivial": trivial}


def _cmd_kappa(doc, opts):
    return ser.report_to_json(d_dimension(ser.divisor_from_json(doc["divisor"]), opts["m_max"]))


def _cmd_logkappa(doc, opts):
    f = ser.polynomial_from_json(doc["polynomial"])
    report = log_kodaira_dimension(f, cross_check=opts.get("cross_check", True), m_max=opts["m_max"])
    return ser.report_to_json(report)


def _cmd_project(doc, opts):
    p = _shape(doc)
    wanted = sorted(tuple(v) for v in doc["face"])
    face = next((d for d in faces(p) if list(d.vertices) == wanted), None)
    if face is None:
        raise ToruskitError(f"{wanted} are not the vertices of a face")
    proj = equivariant_projection(p, face)
    out = {"face": [list(v) for v in face.vertices], "basis": [list(b) for b in proj.basis],
           "orbit_dim": proj.orbit_dim}
    if "point" in doc:
        out["image"] = {"coords": [ser.rational_to_json(c) for c in proj(ser.point_from_json(doc["point"]))]}
    return out


def _cmd_height(doc, opts):
    return {"height": ser.log_to_json(height(ser.point_from_json(doc["point"]), _shape(doc)))}


def _cmd_weil(doc, opts):
    f = ser.polynomial_from_json(doc["polynomial"])
    v = doc["place"]
    lv = weil_function(f, ser.point_from_json(doc["point"]), v)
    return {"place": v, "value": ser.log_to_json(lv.value),
            "lower_bound": ser.log_to_json(weil_lower_bound(f, v))}


def _cmd_distance(doc, opts):
    P = ser.point_from_json(doc["point"])
    v = doc["place"]
    return {"place": v, "distance": ser.log_to_json(boundary_distance(P, v).value),
            "components": [ser.log_to_json(c) for c in boundary_components(P, v)]}


def _enumerate(doc, opts):
    f = ser.polynomial_from_json(doc["polynomial"])
    bound = LogValue.log(opts.get("height", DEFAULT_HEIGHT))
    return enumerate_integral_points(f, ser.places_from_json(doc["places"]), bound, opts["exponent_cap"])


def _cmd_enumerate(doc, opts):
    pts = _enumerate(doc, opts)
    return {"points": [ser.point_to_json(P) for P in pts], "count": len(pts)}


def _cmd_families(doc, opts):
    if "points" in doc:
        pts = [ser.point_from_json(P) for P in doc["points"]]
    else:
        pts = _enumerate(doc, opts)
    fams = detect_coset_families(pts)
    out = []
    for fam in fams:
        out.append({
            "character": list(fam.character) if fam.character is not None else None,
            "constant": ser.rational_to_json(fam.constant) if fam.constant is not None else None,
            "points": [ser.point_to_json(P) for P in fam.points],
        })
    return {"families": out, "count": len(out)}


COMMANDS = {
    "newton": (_cmd_newton, "newton"),
    "ueno": (_cmd_ueno, "ueno"),
    "saturate": (_cmd_saturate, "saturate"),
    "fan": (_cmd_fan, "fan_cmd"),
    "ample": (_cmd_ample, "ample"),
    "resolve": (_cmd_resolve, "resolve"),
    "kappa": (_cmd_kappa, "kappa"),
    "logkappa": (_cmd_logkappa, "logkappa"),
    "project": (_cmd_project, "project"),
    "height": (_cmd_height, "height"),
    "weil": (_cmd_weil, "weil"),
    "distance": (_cmd_distance, "distance"),
    "enumerate": (_cmd_enumerate, "enumerate"),
    "families": (_cmd_families, "families"),
}


def run(command: str, doc: dict, option_pairs=()) -> dict:
    """Execute one job and return its output document (raises on error)."""
    if command not in COMMANDS:
        raise ser.ParseError(f"unknown command {command!r}")
    handler, input_kind = COMMANDS[command]
    opts = _options(command, option_pairs)
    ser.validate(doc, input_kind, "inputs")
    out = handler(doc, opts)
    out["schema"] = f"toruskit/{command}/{ser.SCHEMA_VERSION}"
    out["command"] = command
    return out


def error_document(exc: Exception) -> dict:
    code = getattr(exc, "code", None) or "DomainError"
    return {"schema": "toruskit/error/1", "error": {"code": code, "message": str(exc)}}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toruskit", description="Toric and height computations on split tori.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--in", dest="inp", required=True, help="JSON file, '-' for stdin, or inline JSON")
        p.add_argument("--out", help="write the result here instead of stdout")
        p.add_argument("--opt", action="append", default=[], metavar="KEY=VALUE")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = run(args.command, _read_input(args.inp), args.opt)
        status = 0
    except (ValueError, ArithmeticError) as exc:  # domain and parse errors alike
        doc, status = error_document(exc), 2
    text = ser.dumps(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
