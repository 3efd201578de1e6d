"""Stellar subdivisions, toric desingularization and divisor pullback."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from ._geometry import cone_facets
from .cones import _parallelepiped_points
from .errors import CapExceeded, IncompleteFan, NotCartier, NotSmooth, RayOutsideSupport
from .lattice import LatticeFrame, as_vector, is_unimodular_extension, primitive, rank
from .toricfan import Fan, TorusInvariantDivisor

__all__ = [
    "Subdivision",
    "LogCanonicalReport",
    "stellar_subdivision",
    "resolve_to_smooth",
    "pullback_divisor",
    "log_canonical_boundary",
    "DEFAULT_INSERTION_CAP",
]

DEFAULT_INSERTION_CAP = 512


@dataclass(frozen=True)
class Subdivision:
    source: Fan
    target: Fan
    inserted: tuple

    def replay(self) -> Fan:
        fan = self.source
        for r in self.inserted:
            fan = stellar_subdivision(fan, r)
        return fan

    def then(self, other: "Subdivision") -> "Subdivision":
        if other.source != self.target:
            raise ValueError("subdivisions do not chain")
        return Subdivision(self.source, other.target, self.inserted + other.inserted)


def _star(fan: Fan, ray: tuple) -> Fan:
    touched = [c for c in fan.maximal_cones if c and fan.cone(c).contains(ray)]
    if not touched:
        raise RayOutsideSupport(f"{list(ray)} is not in the support of the fan")
    out = [c for c in fan.maximal_cones if c not in touched]
    for c in touched:
        _, facets = cone_facets(list(c))
        for _, tight in facets:
            face = [c[i] for i in sorted(tight)]
            if not face or not fan.cone(face).contains(ray):
                out.append(tuple(face) + (ray,))
    return Fan(out, fan.rank)


def stellar_subdivision(fan: Fan, ray) -> Fan:
    """Star subdivision of ``fan`` at a primitive vector of its support.

    Each cone containing the ray is replaced by the joins of the ray with
    its faces that miss it. A ray that is already a ray of the fan leaves
    the fan unchanged.
    """
    ray = as_vector(ray)
    if len(ray) != fan.rank:
        raise ValueError("ray has the wrong length")
    if not any(ray):
        raise ValueError("the zero vector is not a ray")
    ray = primitive(ray)
    if ray in fan.rays:
        return fan
    return _star(fan, ray)


@lru_cache(maxsize=1 << 16)
def _is_smooth_cone(c: tuple) -> bool:
    return not c or (rank(c) == len(c) and is_unimodular_extension(c))


def _insertion_ray(c: tuple) -> tuple:
    if rank(c) < len(c):
        # non-simplicial: the sum of the rays lies in the relative interior
        return primitive(tuple(sum(col) for col in zip(*c)))
    frame = LatticeFrame(list(c) + [(0,) * len(c[0])], origin=(0,) * len(c[0]))
    ys = tuple(frame.coords(r) for r in c)
    from .lattice import inverse

    inv = inverse(ys)
    best = None
    for y in _parallelepiped_points(ys):
        if not any(y):
            continue
        lam = [sum(Fraction(y[i]) * inv[i][j] for i in range(len(y))) for j in range(len(y))]
        x = tuple(int(t) for t in frame.point(y))
        key = (sum(lam), x)
        if best is None or key < best:
            best = key
    return best[1]


def resolve_to_smooth(fan: Fan, cap: int = DEFAULT_INSERTION_CAP) -> Subdivision:
    """Subdivide until every cone is generated by part of a lattice basis.

    Repeatedly takes the lexicographically least non-smooth maximal cone.
    Non-simplicial cones get the primitive sum of their rays. Simplicial
    cones get the nonzero point of their fundamental parallelepiped with the
    least barycentric coordinate sum, ties broken lexicographically.
    """
    current = fan
    inserted = []
    while True:
        bad = [c for c in current.maximal_cones if not _is_smooth_cone(c)]
        if not bad:
            return Subdivision(fan, current, tuple(inserted))
        if len(inserted) >= cap:
            raise CapExceeded(f"more than {cap} insertions needed")
        ray = _insertion_ray(min(bad))
        current = stellar_subdivision(current, ray)
        inserted.append(ray)


def pullback_divisor(d: TorusInvariantDivisor, s: Subdivision) -> TorusInvariantDivisor:
    """Pull ``d`` back to the finer fan: ``a'_r = -psi_d(r)``."""
    if d.fan != s.source:
        raise ValueError("divisor does not live on the source fan of the subdivision")
    chars = d.characters()
    coeffs = {}
    for r in s.target.rays:
        c = s.source.maximal_cone_containing(r)
        if c is None:
            raise RayOutsideSupport(f"{list(r)} is outside the source fan")
        v = sum(Fraction(a) * b for a, b in zip(chars[c], r))
        if v.denominator != 1:
            raise NotCartier(f"support function is not integral at {list(r)}")
        coeffs[r] = -int(v)
    sections = None
    if d.vertex_sections is not None:
        sections = {}
        for c in s.target.maximal_cones:
            host = s.source.maximal_cone_containing(
                tuple(sum(col) for col in zip(*c)) if c else (0,) * s.target.rank)
            sections[c] = d.vertex_sections[host]
    return TorusInvariantDivisor(s.target, coeffs, source=d.source, vertex_sections=sections)


@dataclass(frozen=True)
class LogCanonicalReport:
    canonical: TorusInvariantDivisor
    boundary: TorusInvariantDivisor
    total: TorusInvariantDivisor
    is_trivial: bool


def log_canonical_boundary(fan: Fan) -> LogCanonicalReport:
    """Canonical divisor (all ``-1``), reduced boundary (all ``+1``) and their sum."""
    if not fan.is_complete():
        raise IncompleteFan("the log canonical check needs a complete fan")
    if not fan.is_smooth():
        raise NotSmooth("the log canonical check needs a smooth fan")
    k = TorusInvariantDivisor(fan, [-1] * len(fan.rays))
    b = TorusInvariantDivisor(fan, [1] * len(fan.rays))
    total = k + b
    return LogCanonicalReport(k, b, total, total.is_principal())
