"""JSON encoding of the package's objects and schema validation of documents."""
from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from importlib import resources

import jsonschema
import mpmath

from .heights import LogValue, PlaceSet, RationalTorusPoint
from .newton import LatticePolytope, LaurentPolynomial
from .resolve import Subdivision
from .sections import MINUS_INFINITY, KodairaReport
from .toricfan import Fan, TorusInvariantDivisor

SCHEMA_VERSION = 1


class ParseError(ValueError):
    code = "ParseError"


@lru_cache(maxsize=None)
def _schema_file(name: str) -> dict:
    text = resources.files("toruskit").joinpath("schemas", f"{name}.json").read_text()
    return json.loads(text)


def validate(doc, kind: str, which: str = "inputs") -> None:
    """Validate ``doc`` against definition ``kind`` of ``schemas/<which>.json``."""
    full = _schema_file(which)
    schema = {"$defs": full["$defs"], "$ref": f"#/$defs/{kind}"}
    try:
        jsonschema.Draft202012Validator(schema).validate(doc)
    except jsonschema.ValidationError as exc:
        raise ParseError(f"{kind}: {exc.message}") from None


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# -- rationals and logs ------------------------------------------------------

def rational_from_json(x) -> Fraction:
    if isinstance(x, dict):
        return Fraction(int(x["num"]), int(x.get("den", 1)))
    return Fraction(x)


def rational_to_json(x) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def log_to_json(v: LogValue) -> dict:
    return {
        "terms": [{"prime": p, "coeff": rational_to_json(c)} for p, c in v.terms.items()],
        "approx": mpmath.nstr(v.to_mpf(), 20),
    }


def log_from_json(doc) -> LogValue:
    return LogValue({t["prime"]: rational_from_json(t["coeff"]) for t in doc["terms"]})


# -- polynomials, polytopes, points ------------------------------------------

def polynomial_from_json(doc) -> LaurentPolynomial:
    return LaurentPolynomial([(t["exp"], rational_from_json(t["coeff"])) for t in doc["terms"]],
                             doc.get("rank"))


def polynomial_to_json(f: LaurentPolynomial) -> dict:
    return {"rank": f.rank,
            "terms": [{"exp": list(e), "coeff": rational_to_json(c)} for e, c in f.terms.items()]}


def polytope_from_json(doc) -> LatticePolytope:
    return LatticePolytope(doc["points"])


def polytope_to_json(p: LatticePolytope) -> dict:
    return {"points": [list(v) for v in p.vertices]}


def point_from_json(doc) -> RationalTorusPoint:
    return RationalTorusPoint(rational_from_json(c) for c in doc["coords"])


def point_to_json(P: RationalTorusPoint) -> dict:
    return {"coords": [rational_to_json(c) for c in P.coords]}


def places_from_json(doc) -> PlaceSet:
    return PlaceSet(doc["primes"])


# -- fans and divisors -------------------------------------------------------

def fan_from_json(doc) -> Fan:
    return Fan([c["rays"] for c in doc["cones"]], doc["rank"])


def fan_to_json(fan: Fan) -> dict:
    return {"rank": fan.rank, "cones": [{"rays": [list(r) for r in c]} for c in fan.maximal_cones]}


def divisor_from_json(doc) -> TorusInvariantDivisor:
    fan = fan_from_json(doc["fan"])
    return TorusInvariantDivisor(fan, {tuple(c["ray"]): c["a"] for c in doc["coeffs"]})


def divisor_to_json(d: TorusInvariantDivisor) -> dict:
    return {"fan": fan_to_json(d.fan),
            "coeffs": [{"ray": list(r), "a": a} for r, a in d.coeffs.items()]}


def subdivision_to_json(s: Subdivision) -> dict:
    return {"source": fan_to_json(s.source), "target": fan_to_json(s.target),
            "inserted": [list(r) for r in s.inserted]}


def kappa_to_json(k) -> int | str:
    return "-inf" if k == MINUS_INFINITY else int(k)


def report_to_json(r: KodairaReport) -> dict:
    doc = {
        "kappa": kappa_to_json(r.kappa),
        "m0": r.m0,
        "samples": [[m, h] for m, h in r.samples],
        "methods": list(r.methods),
        "rank": r.rank,
        "cap": r.cap,
        "big": r.big,
        "growth_degree": r.growth_degree,
    }
    for key in ("stabilizer_rank", "cross_check_kappa", "consistent", "inserted_rays"):
        if key in r.details:
            val = r.details[key]
            doc[key] = kappa_to_json(val) if key == "cross_check_kappa" else val
    return doc
