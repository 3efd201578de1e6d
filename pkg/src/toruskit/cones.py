"""Rational cones, Hilbert bases and the saturation multiple of a polytope."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product

from ._geometry import close_under_intersection, cone_facets
from .errors import CapExceeded, NotAVertex, NotPointed
from .lattice import (LatticeFrame, as_vector, dot, integer_inverse, inverse, primitive,
                      rank, saturate_sublattice, smith_normal_form)
from .newton import Face, LatticePolytope, dilate, lattice_points

__all__ = [
    "RationalCone",
    "HilbertBasis",
    "vertex_cone",
    "hilbert_basis",
    "is_saturated_at_vertex",
    "smallest_good_multiple",
    "face_cone",
    "lineality_subgroup",
    "DEFAULT_MULTIPLE_CAP",
]

DEFAULT_MULTIPLE_CAP = 24


class RationalCone:
    """Cone ``{sum l_i g_i : l_i >= 0}`` with a minimal primitive generating set.

    Use :meth:`from_generators`; it reduces any generating set to extremal
    rays plus plus/minus a basis of the lineality lattice.
    """

    def __init__(self, generators, rank: int, lineality: tuple, facets: tuple, equations: tuple):
        self.generators = tuple(sorted(generators))
        self.rank = rank
        self.lineality = lineality
        self.lineality_rank = len(lineality)
        self._facets = facets
        self._equations = equations

    @classmethod
    def from_generators(cls, vectors, ambient_rank: int | None = None) -> "RationalCone":
        vecs = [as_vector(v) for v in vectors]
        if not vecs and ambient_rank is None:
            raise ValueError("ambient rank needed for the zero cone")
        n = ambient_rank if ambient_rank is not None else len(vecs[0])
        vecs = [v for v in vecs if any(v)]
        if not vecs:
            return cls((), n, (), (), tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))
        frame, facets = cone_facets(vecs)
        equations = tuple(frame.equations())
        everything = frozenset(range(len(vecs)))
        if facets:
            lin_idx = everything
            for _, t in facets:
                lin_idx &= t
        else:
            lin_idx = everything
        lineality = tuple(saturate_sublattice([vecs[i] for i in lin_idx], n))
        lin_rank = len(lineality)
        gens = set(lineality) | {tuple(-x for x in b) for b in lineality}
        faces = close_under_intersection(everything, [t for _, t in facets])
        for face in faces:
            if rank([vecs[i] for i in face]) != lin_rank + 1:
                continue
            cands = [primitive(vecs[i]) for i in face if i not in lin_idx
                     and rank([vecs[i]] + list(lineality)) > lin_rank]
            gens.add(min(cands, key=lambda v: (dot(v, v), v)))
        return cls(gens, n, lineality, tuple(u for u, _ in facets), equations)

    @property
    def dim(self) -> int:
        return self.rank - len(self._equations)

    @property
    def is_pointed(self) -> bool:
        return self.lineality_rank == 0

    @property
    def facet_normals(self) -> tuple:
        return self._facets

    @property
    def equations(self) -> tuple:
        return self._equations

    def contains(self, x) -> bool:
        return (all(dot(e, x) == 0 for e in self._equations)
                and all(dot(u, x) >= 0 for u in self._facets))

    def contains_in_relative_interior(self, x) -> bool:
        return (all(dot(e, x) == 0 for e in self._equations)
                and all(dot(u, x) > 0 for u in self._facets))

    def __eq__(self, other):
        return (isinstance(other, RationalCone) and self.rank == other.rank
                and self.generators == other.generators
                and self.lineality_rank == other.lineality_rank)

    def __hash__(self):
        return hash((self.generators, self.lineality_rank))

    def __repr__(self):
        return (f"RationalCone(generators={list(self.generators)}, "
                f"lineality_rank={self.lineality_rank})")


class HilbertBasis(tuple):
    """Sorted tuple of Hilbert basis elements with a back-reference to the cone."""

    def __new__(cls, cone: RationalCone, elements):
        obj = super().__new__(cls, sorted(elements))
        obj.cone = cone
        return obj

    @property
    def elements(self) -> tuple:
        return tuple(self)


def _check_vertex(p: LatticePolytope, v) -> tuple:
    v = as_vector(v)
    if v not in p.vertices:
        raise NotAVertex(f"{v} is not a vertex of {p}")
    return v


def vertex_cone(p: LatticePolytope, v) -> RationalCone:
    """Cone generated by ``q - v`` for the points ``q`` of ``p``."""
    v = _check_vertex(p, v)
    gens = [tuple(a - b for a, b in zip(w, v)) for w in p.vertices if w != v]
    return RationalCone.from_generators(gens, p.rank)


def face_cone(p: LatticePolytope, d: Face) -> RationalCone:
    """Cone generated by ``m' - m`` with ``m'`` in ``p`` and ``m`` in the face ``d``.

    Vertices suffice to generate it, since both sets are convex hulls of them.
    """
    gens = [tuple(a - b for a, b in zip(w, m)) for w in p.vertices for m in d.vertices]
    return RationalCone.from_generators(gens, p.rank)


def lineality_subgroup(c: RationalCone) -> list:
    """Basis (HNF rows) of the largest subgroup ``c ∩ -c ∩ Z^n``."""
    return list(c.lineality)


def _pulling_triangulation(rays: tuple) -> list:
    """Simplicial cones (tuples of rays) triangulating a pointed cone."""
    if rank(rays) == len(rays):
        return [rays]
    apex = rays[0]
    _, facets = cone_facets(list(rays))
    out = []
    for _, tight in facets:
        if 0 in tight:
            continue
        sub = tuple(rays[i] for i in sorted(tight))
        for simplex in _pulling_triangulation(sub):
            out.append((apex,) + simplex)
    return out


def _parallelepiped_points(simplex: tuple) -> list:
    """Lattice points of the half-open parallelepiped spanned by a basis of ``Z^d``."""
    d = len(simplex)
    snf = smith_normal_form(simplex)
    # Z^d R = Z^d diag V^{-1}, so a V^{-1} with 0 <= a_i < diag_i are coset representatives
    vinv = integer_inverse(snf.right)
    rinv = inverse(simplex)
    out = []
    for a in product(*(range(s) for s in snf.diag)):
        x = tuple(sum(a[i] * vinv[i][j] for i in range(d)) for j in range(d))
        lam = [sum(Fraction(x[i]) * rinv[i][j] for i in range(d)) for j in range(d)]
        lam = [l - (l.numerator // l.denominator) for l in lam]
        pt = tuple(sum(lam[i] * simplex[i][j] for i in range(d)) for j in range(d))
        out.append(tuple(int(c) for c in pt))
    return out


def hilbert_basis(c: RationalCone) -> HilbertBasis:
    """Minimal generating set of the monoid ``c ∩ Z^n`` of a pointed cone.

    Candidates are the lattice points of the fundamental parallelepipeds of a
    triangulation plus the rays; all of them lie in the zonotope spanned by
    the rays. A candidate is kept unless another candidate can be subtracted
    from it without leaving the cone.
    """
    if not c.is_pointed:
        raise NotPointed("Hilbert bases are only defined here for pointed cones")
    if not c.generators:
        return HilbertBasis(c, ())
    frame = LatticeFrame(list(c.generators) + [(0,) * c.rank], origin=(0,) * c.rank)
    rays = tuple(sorted(frame.coords(g) for g in c.generators))
    cands = set(rays)
    for simplex in _pulling_triangulation(rays):
        cands.update(p for p in _parallelepiped_points(simplex) if any(p))
    cands = sorted(cands)
    ambient = {y: tuple(int(t) for t in frame.point(y)) for y in cands}
    elements = []
    for x in cands:
        xa = ambient[x]
        reducible = any(
            y != x and c.contains(tuple(a - b for a, b in zip(xa, ambient[y])))
            for y in cands)
        if not reducible:
            elements.append(xa)
    return HilbertBasis(c, elements)


def _in_monoid(target, gens, cone: RationalCone) -> bool:
    @lru_cache(maxsize=None)
    def reach(x):
        if not any(x):
            return True
        for g in gens:
            rest = tuple(a - b for a, b in zip(x, g))
            if cone.contains(rest) and reach(rest):
                return True
        return False

    return reach(tuple(target))


def is_saturated_at_vertex(p: LatticePolytope, v, basis: HilbertBasis | None = None) -> bool:
    """Whether the differences ``q - v`` generate the monoid of the vertex cone."""
    v = _check_vertex(p, v)
    cone = vertex_cone(p, v)
    hb = basis if basis is not None else hilbert_basis(cone)
    gens = tuple(tuple(a - b for a, b in zip(q, v)) for q in lattice_points(p) if q != v)
    gens = tuple(sorted(gens, key=lambda g: (-sum(abs(x) for x in g), g)))
    return all(_in_monoid(h, gens, cone) for h in hb)


def smallest_good_multiple(p: LatticePolytope, cap: int = DEFAULT_MULTIPLE_CAP) -> int:
    """Least ``n >= 1`` such that ``n p`` is saturated at every vertex.

    Raises ``CapExceeded`` when no ``n <= cap`` works.
    """
    if cap < 1:
        raise ValueError("cap must be positive")
    bases = {v: hilbert_basis(vertex_cone(p, v)) for v in p.vertices}
    for n in range(1, cap + 1):
        q = dilate(p, n)
        if all(is_saturated_at_vertex(q, tuple(n * x for x in v), bases[v]) for v in p.vertices):
            return n
    raise CapExceeded(f"no saturating multiple up to {cap}")
