"""Fans, torus-invariant divisors and the toric completion attached to a polytope.

Fans live in the cocharacter lattice ``N = Z^n``; polytopes and characters
live in the dual lattice ``M``. A divisor ``sum a_r D_r`` has section
polytope ``{m : <m, r> >= -a_r}`` and, on each cone where it is
(Q-)Cartier, a local character ``m_sigma`` with ``<m_sigma, r> = -a_r``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Mapping

from ._geometry import close_under_intersection, cone_facets, solve
from .cones import RationalCone, face_cone, lineality_subgroup
from .errors import (FanMismatch, IncompleteFan, NotFullDimensional, NotPointed,
                     RankMismatch, RayOutsideSupport)
from .lattice import (as_matrix, as_vector, dot, is_unimodular_extension, matmul,
                      primitive, rank, solve_integral)
from .newton import Face, LatticePolytope, LaurentPolynomial, faces, newton_polytope

__all__ = [
    "Fan",
    "OrbitDescriptor",
    "TorusInvariantDivisor",
    "MonomialMap",
    "EquivariantProjection",
    "completion_fan",
    "orbit_table",
    "divisor_closure",
    "is_ample",
    "orbit_avoidance",
    "orbit_avoidance_on_fan",
    "equivariant_projection",
    "apply_monomial_map",
]


# Cones are immutable and recur across successive subdivisions, so the
# per-cone work is memoized.
@lru_cache(maxsize=1 << 16)
def _cone(rays: tuple, n: int) -> RationalCone:
    return RationalCone.from_generators(list(rays), n)


@lru_cache(maxsize=1 << 16)
def _face_tuples(c: tuple) -> frozenset:
    if not c:
        return frozenset({()})
    _, facets = cone_facets(list(c))
    sets = close_under_intersection(frozenset(range(len(c))), [t for _, t in facets])
    return frozenset(tuple(c[i] for i in sorted(s)) for s in sets)


@lru_cache(maxsize=1 << 16)
def _dim(c: tuple) -> int:
    return rank(c) if c else 0


class Fan:
    """A fan given by its maximal cones, each a tuple of primitive rays.

    Generating sets are reduced to extremal rays and cones that are faces
    of other listed cones are dropped. Cones must be pointed.
    """

    def __init__(self, cones, rank: int | None = None):
        reduced = set()
        n = rank
        for c in cones:
            vecs = [primitive(as_vector(r)) for r in c]
            vecs = [v for v in vecs if any(v)]
            if vecs:
                if n is None:
                    n = len(vecs[0])
                if any(len(v) != n for v in vecs):
                    raise RankMismatch("rays of different lengths")
                rc = _cone(tuple(sorted(set(vecs))), n)
                if not rc.is_pointed:
                    raise NotPointed(f"cone {vecs} contains a line")
                vecs = rc.generators
            reduced.add(tuple(sorted(set(vecs))))
        if n is None:
            raise ValueError("rank needed for a fan without rays")
        self.rank = n
        raw = sorted(reduced)
        faces_of = {c: self._faces_of(c) for c in raw}
        holders: dict = {}
        for d in raw:
            for r in d:
                holders.setdefault(r, set()).add(d)
        maximal = []
        for c in raw:
            # only cones containing every ray of c can have c as a face
            supers = set.intersection(*(holders[r] for r in c)) if c else set(raw)
            if not any(d != c and c in faces_of[d] for d in supers):
                maximal.append(c)
        self.maximal_cones = tuple(sorted(maximal))
        self.rays = tuple(sorted({r for c in self.maximal_cones for r in c}))
        self._faces = {c: faces_of[c] for c in self.maximal_cones}

    @staticmethod
    def _faces_of(c: tuple) -> frozenset:
        return _face_tuples(c)

    @cached_property
    def cones(self) -> tuple:
        """Every cone of the fan (including the zero cone), by dimension then rays."""
        allc = set()
        for fs in self._faces.values():
            allc |= fs
        return tuple(sorted(allc, key=lambda c: (_dim(c), c)))

    def cone(self, rays) -> RationalCone:
        return _cone(tuple(rays), self.rank)

    def cone_dim(self, rays) -> int:
        return _dim(tuple(rays))

    @cached_property
    def walls(self) -> dict:
        """Codimension-one faces of full-dimensional maximal cones -> the cones containing them."""
        out: dict = {}
        for c in self.maximal_cones:
            if self.cone_dim(c) != self.rank:
                continue
            for f in self._faces[c]:
                if self.cone_dim(f) == self.rank - 1:
                    out.setdefault(f, []).append(c)
        return out

    def is_complete(self) -> bool:
        if not self.maximal_cones:
            return False
        if any(self.cone_dim(c) != self.rank for c in self.maximal_cones):
            return False
        return all(len(v) == 2 for v in self.walls.values())

    def is_simplicial(self) -> bool:
        return all(rank(c) == len(c) for c in self.maximal_cones if c)

    def is_smooth(self) -> bool:
        return all(not c or (rank(c) == len(c) and is_unimodular_extension(c))
                   for c in self.maximal_cones)

    def faces_of(self, c: tuple) -> frozenset:
        c = tuple(sorted(c))
        if c in self._faces:
            return self._faces[c]
        return self._faces_of(c)

    def smallest_cone_containing(self, u) -> tuple | None:
        """The cone whose relative interior contains ``u``, or ``None``."""
        u = tuple(u)
        for c in self.cones:
            if not c:
                if not any(u):
                    return c
                continue
            if self.cone(c).contains_in_relative_interior(u):
                return c
        return None

    def maximal_cone_containing(self, u) -> tuple | None:
        for c in self.maximal_cones:
            if (not c and not any(u)) or (c and self.cone(c).contains(u)):
                return c
        return None

    def __eq__(self, other):
        return (isinstance(other, Fan) and self.rank == other.rank
                and self.maximal_cones == other.maximal_cones)

    def __hash__(self):
        return hash((self.rank, self.maximal_cones))

    def __repr__(self):
        return f"Fan(rank={self.rank}, rays={len(self.rays)}, maximal_cones={len(self.maximal_cones)})"


@dataclass(frozen=True)
class OrbitDescriptor:
    """Torus orbit of the completion attached to a face of the polytope.

    ``character_basis`` spans the character lattice of the orbit's torus;
    ``normal_rays`` are the rays of the corresponding cone of the fan.
    """

    face: Face
    dim: int
    character_basis: tuple
    normal_rays: tuple

    def closure_contains(self, other: "OrbitDescriptor") -> bool:
        return set(other.face.vertices) <= set(self.face.vertices)


class TorusInvariantDivisor:
    """``sum a_r D_r`` over the rays of a fan, with integer coefficients.

    ``source`` and ``vertex_sections`` are filled in by :func:`divisor_closure`;
    the latter maps each maximal cone to the polytope vertex whose monomial
    trivializes the divisor there.
    """

    def __init__(self, fan: Fan, coeffs, source: LaurentPolynomial | None = None,
                 vertex_sections: Mapping | None = None):
        self.fan = fan
        if isinstance(coeffs, Mapping):
            c = {as_vector(r): int(a) for r, a in coeffs.items()}
            if set(c) != set(fan.rays):
                raise ValueError("divisor coefficients must be keyed by exactly the rays of the fan")
        else:
            vals = list(coeffs)
            if len(vals) != len(fan.rays):
                raise ValueError("one coefficient per ray expected")
            c = {r: int(a) for r, a in zip(fan.rays, vals)}
        self.coeffs = {r: c[r] for r in fan.rays}
        self.source = source
        self.vertex_sections = dict(vertex_sections) if vertex_sections else None

    @classmethod
    def zero(cls, fan: Fan) -> "TorusInvariantDivisor":
        return cls(fan, [0] * len(fan.rays))

    def coefficient(self, ray) -> int:
        return self.coeffs[tuple(ray)]

    def local_character(self, cone) -> tuple | None:
        """Rational ``m`` with ``<m, r> = -a_r`` on the rays of ``cone``, or ``None``."""
        cone = tuple(cone)
        if not cone:
            return (Fraction(0),) * self.fan.rank
        return solve(list(cone), [-self.coeffs[r] for r in cone])

    def local_integral_character(self, cone) -> tuple | None:
        cone = tuple(cone)
        if not cone:
            return (0,) * self.fan.rank
        return solve_integral(list(cone), [-self.coeffs[r] for r in cone])

    def is_q_cartier(self) -> bool:
        return all(self.local_character(c) is not None for c in self.fan.maximal_cones)

    def is_cartier(self) -> bool:
        return all(self.local_integral_character(c) is not None for c in self.fan.maximal_cones)

    def characters(self) -> dict:
        """Maximal cone -> local character; raises ``NotCartier`` if some cone has none."""
        from .errors import NotCartier

        out = {}
        for c in self.fan.maximal_cones:
            m = self.local_character(c)
            if m is None:
                raise NotCartier(f"no linear support function on cone {list(c)}")
            out[c] = m
        return out

    def support_function(self, u) -> Fraction:
        """Value of the piecewise-linear function ``psi`` with ``psi(r) = -a_r``."""
        u = as_vector(u)
        c = self.fan.maximal_cone_containing(u)
        if c is None:
            raise RayOutsideSupport(f"{u} is not in the support of the fan")
        m = self.characters()[c]
        return sum(Fraction(a) * b for a, b in zip(m, u))

    def is_principal(self) -> bool:
        if not self.fan.rays:
            return True
        return solve_integral(list(self.fan.rays), [-self.coeffs[r] for r in self.fan.rays]) is not None

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coeffs.values())

    def section_inequalities(self, m: int = 1) -> list:
        """Pairs ``(r, -m a_r)`` meaning ``<u, r> >= -m a_r``."""
        return [(r, -m * a) for r, a in self.coeffs.items()]

    def _check(self, other):
        if not isinstance(other, TorusInvariantDivisor) or other.fan != self.fan:
            raise ValueError("divisors live on different fans")

    def __add__(self, other):
        self._check(other)
        return TorusInvariantDivisor(self.fan, {r: a + other.coeffs[r] for r, a in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self * -1

    def __mul__(self, k: int):
        return TorusInvariantDivisor(self.fan, {r: k * a for r, a in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, TorusInvariantDivisor) and self.fan == other.fan
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.fan, tuple(self.coeffs.items())))

    def __repr__(self):
        return f"TorusInvariantDivisor({ {r: a for r, a in self.coeffs.items()} })"


class MonomialMap:
    """Homomorphism of tori ``G_m^src -> G_m^tgt`` given by an integer ``tgt x src`` matrix.

    Coordinate ``j`` of the image of ``t`` is ``prod_k t_k ** matrix[j][k]``.
    """

    def __init__(self, matrix):
        m = as_matrix(matrix)
        if not m or not m[0]:
            raise ValueError("empty matrix")
        self.matrix = m

    @property
    def target_rank(self) -> int:
        return len(self.matrix)

    @property
    def source_rank(self) -> int:
        return len(self.matrix[0])

    def compose(self, inner: "MonomialMap") -> "MonomialMap":
        """``self`` after ``inner``."""
        if inner.target_rank != self.source_rank:
            raise RankMismatch("cannot compose: ranks do not match")
        return MonomialMap(matmul(self.matrix, inner.matrix))

    __matmul__ = compose

    def __eq__(self, other):
        return isinstance(other, MonomialMap) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"MonomialMap({[list(r) for r in self.matrix]})"


def _character(t, exps) -> Fraction:
    out = Fraction(1)
    for x, k in zip(t, exps):
        out *= Fraction(x) ** k
    return out


def apply_monomial_map(theta: MonomialMap, obj):
    """Push a torus point forward, or pull a Laurent polynomial back, along ``theta``.

    Polynomials on the target torus become polynomials on the source via
    ``x^m -> t^(theta^T m)``. Points may be sequences or objects with a
    ``coords`` attribute; the image is a tuple of Fractions.
    """
    if isinstance(obj, LaurentPolynomial):
        if obj.rank != theta.target_rank:
            raise RankMismatch(f"polynomial has rank {obj.rank}, map target has rank {theta.target_rank}")
        cols = list(zip(*theta.matrix))
        terms: dict = {}
        for e, c in obj.terms.items():
            new = tuple(dot(col, e) for col in cols)
            terms[new] = terms.get(new, 0) + c
        return LaurentPolynomial(terms, theta.source_rank)
    coords = obj.coords if hasattr(obj, "coords") else obj
    coords = [Fraction(x) for x in coords]
    if len(coords) != theta.source_rank:
        raise RankMismatch(f"point has {len(coords)} coordinates, map source has rank {theta.source_rank}")
    if any(x == 0 for x in coords):
        raise ValueError("torus points have nonzero coordinates")
    return tuple(_character(coords, row) for row in theta.matrix)


def completion_fan(p: LatticePolytope) -> Fan:
    """Normal fan of a full-dimensional polytope: one maximal cone per vertex.

    The cone at vertex ``v`` is spanned by the inner normals of the facets
    through ``v``.
    """
    if p.dim < p.rank:
        raise NotFullDimensional(f"polytope has dimension {p.dim} in rank {p.rank}")
    cones = []
    for i in range(len(p.vertices)):
        cones.append([u for u, _, t in p.facets if i in t])
    return Fan(cones, p.rank)


def orbit_table(p: LatticePolytope) -> list:
    out = []
    for d in faces(p):
        basis = tuple(lineality_subgroup(face_cone(p, d)))
        idx = {p.vertices.index(v) for v in d.vertices}
        normals = tuple(u for u, _, t in p.facets if idx <= t)
        out.append(OrbitDescriptor(d, d.dim, basis, normals))
    return out


def divisor_closure(f: LaurentPolynomial, fan: Fan) -> TorusInvariantDivisor:
    """The boundary-supported divisor whose sections are spanned by the monomials of ``f``.

    The Newton polytope is first translated so its lexicographically least
    vertex sits at the origin; then ``a_r = -min <r, m>`` over the polytope.
    Monomial multiples of ``f`` therefore give the same divisor. Each
    maximal cone must have a single vertex minimizing all of its rays,
    otherwise the fan does not refine the normal fan and ``FanMismatch`` is
    raised.
    """
    if f.rank != fan.rank:
        raise RankMismatch(f"polynomial rank {f.rank} differs from fan rank {fan.rank}")
    p = newton_polytope(f)
    v0 = p.vertices[0]
    verts = [tuple(a - b for a, b in zip(v, v0)) for v in p.vertices]
    coeffs = {r: -min(dot(r, v) for v in verts) for r in fan.rays}
    sections = {}
    for c in fan.maximal_cones:
        good = [v for v in verts if all(dot(r, v) == -coeffs[r] for r in c)]
        if not good:
            raise FanMismatch(f"cone {list(c)} does not lie in a normal cone of the Newton polytope")
        sections[c] = min(good)
    return TorusInvariantDivisor(fan, coeffs, source=f, vertex_sections=sections)


def is_ample(d: TorusInvariantDivisor) -> bool:
    """Strict convexity of the support function across every wall of a complete fan."""
    fan = d.fan
    if not fan.is_complete():
        raise IncompleteFan("ampleness is only tested on complete fans")
    if not d.is_q_cartier():
        return False
    chars = d.characters()
    for wall, (c1, c2) in fan.walls.items():
        for here, there in ((c1, c2), (c2, c1)):
            m = chars[here]
            r = next(x for x in there if x not in wall)
            if sum(Fraction(a) * b for a, b in zip(m, r)) <= -d.coeffs[r]:
                return False
    return True


def orbit_avoidance(f: LaurentPolynomial, polytope: LatticePolytope | None = None) -> bool:
    """Whether every face of the polytope (default: Newton polytope) meets the support of ``f``.

    Equivalently, the zero locus of the section ``f`` contains no torus orbit
    of the completion.
    """
    p = polytope if polytope is not None else newton_polytope(f)
    if p.rank != f.rank:
        raise RankMismatch("polytope and polynomial ranks differ")
    support = f.support
    return all(any(d.contains(m) for m in support) for d in faces(p))


def orbit_avoidance_on_fan(f: LaurentPolynomial, fan: Fan,
                           polytope: LatticePolytope | None = None) -> bool:
    """Orbit avoidance for every cone of an arbitrary fan refining the normal fan.

    The orbit of a cone with interior vector ``u`` sees the face of the
    polytope minimizing ``u``; the section avoids that orbit iff the face
    contains a support point.
    """
    p = polytope if polytope is not None else newton_polytope(f)
    support = [m for m in f.support if p.contains(m)]
    for c in fan.cones:
        u = [sum(col) for col in zip(*c)] if c else [0] * fan.rank
        low = p.min_value(u)
        if not any(dot(u, m) == low for m in support):
            return False
    return True


@dataclass(frozen=True)
class EquivariantProjection:
    """Retraction of the open set attached to a face onto that face's orbit torus.

    On the dense torus it sends ``t`` to ``(t^b)`` for ``b`` in ``basis``.
    """

    face: Face
    basis: tuple
    cone: RationalCone = field(repr=False)

    @property
    def orbit_dim(self) -> int:
        return len(self.basis)

    def __call__(self, t) -> tuple:
        coords = t.coords if hasattr(t, "coords") else t
        if any(Fraction(x) == 0 for x in coords):
            raise ValueError("torus points have nonzero coordinates")
        return tuple(_character(coords, b) for b in self.basis)

    def orbit_character(self, values, m) -> Fraction:
        """Value of ``x^m`` at the orbit point with coordinates ``values``.

        Zero for characters of the cone outside its lineality space; a
        ``ValueError`` for characters that are not regular on the open set.
        """
        m = as_vector(m)
        if not self.cone.contains(m):
            raise ValueError(f"x^{list(m)} is not regular on this open set")
        if not self.basis:
            return Fraction(0) if any(m) else Fraction(1)
        coeffs = solve_integral([list(col) for col in zip(*self.basis)], m)
        if coeffs is None:
            return Fraction(0)
        return _character(values, coeffs)


def equivariant_projection(p: LatticePolytope, d: Face) -> EquivariantProjection:
    cone = face_cone(p, d)
    return EquivariantProjection(d, tuple(lineality_subgroup(cone)), cone)
