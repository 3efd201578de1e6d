"""Laurent polynomials, Newton polytopes and the translation stabilizer of (f)."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import ceil, floor
from typing import Iterable, Mapping, Sequence

from ._geometry import affine_rank, close_under_intersection, cone_facets
from .lattice import LatticeFrame, as_vector, dot, kernel_basis

__all__ = [
    "LaurentPolynomial",
    "LatticePolytope",
    "Face",
    "newton_polytope",
    "lattice_points",
    "dilate",
    "faces",
    "ueno_stabilizer",
    "quotient_by_stabilizer",
]


class LaurentPolynomial:
    """A Laurent polynomial with rational coefficients.

    Parameters
    ----------
    terms : mapping or iterable of pairs
        Exponent vector -> coefficient. Zero coefficients are dropped.
    rank : int, optional
        Number of variables; inferred from the exponents when omitted.

    Examples
    --------
    >>> f = LaurentPolynomial({(1, 0): 1, (0, 1): -1})
    >>> f((3, 1))
    Fraction(2, 1)
    """

    __slots__ = ("_terms", "rank")

    def __init__(self, terms, rank: int | None = None):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        for exp, c in items:
            e = as_vector(exp)
            acc[e] = acc.get(e, Fraction(0)) + Fraction(c)
        acc = {e: c for e, c in acc.items() if c != 0}
        if not acc:
            raise ValueError("a Laurent polynomial needs at least one nonzero term")
        ranks = {len(e) for e in acc}
        if len(ranks) != 1:
            raise ValueError("exponent vectors of different lengths")
        r = ranks.pop()
        if rank is not None and rank != r:
            raise ValueError(f"exponents have length {r}, expected rank {rank}")
        if r < 1:
            raise ValueError("rank must be at least 1")
        self._terms = dict(sorted(acc.items()))
        self.rank = r

    @classmethod
    def monomial(cls, exp, coeff=1):
        return cls({tuple(exp): coeff})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    @property
    def support(self) -> list:
        return list(self._terms)

    def coefficient(self, exp) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def __call__(self, point) -> Fraction:
        pt = [Fraction(x) for x in point]
        if len(pt) != self.rank:
            raise ValueError("point has the wrong number of coordinates")
        total = Fraction(0)
        for e, c in self._terms.items():
            term = c
            for x, k in zip(pt, e):
                term *= x ** k
            total += term
        return total

    def __mul__(self, other):
        if not isinstance(other, LaurentPolynomial):
            return LaurentPolynomial({e: c * Fraction(other) for e, c in self._terms.items()})
        if other.rank != self.rank:
            raise ValueError("rank mismatch")
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 1:
            raise ValueError("only positive powers")
        out = self
        for _ in range(n - 1):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, LaurentPolynomial) and self._terms == other._terms

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def __repr__(self):
        body = " + ".join(f"{c}*x^{list(e)}" for e, c in self._terms.items())
        return f"LaurentPolynomial({body})"


class LatticePolytope:
    """Convex hull of finitely many points of ``Z^n``.

    Only the vertices are stored. Facet inequalities, the affine frame and
    the face lattice are computed lazily and cached.
    """

    def __init__(self, points: Iterable[Sequence[int]]):
        pts = sorted({as_vector(p) for p in points})
        if not pts:
            raise ValueError("empty polytope")
        if len({len(p) for p in pts}) != 1:
            raise ValueError("points of different lengths")
        self.rank = len(pts[0])
        self._frame = LatticeFrame(pts)
        self.dim = self._frame.dim
        if self.dim == 0:
            self.vertices = (pts[0],)
            self._facets = ()
            return
        homog = [(1,) + self._frame.coords(p) for p in pts]
        _, raw = cone_facets(homog)
        facets = []
        for normal, tight in raw:
            if not tight:
                continue
            c0, c = normal[0], normal[1:]
            facets.append((c0, c, tight))
        tight_of = {i: [t for _, _, t in facets if i in t] for i in range(len(pts))}
        verts = []
        for i, p in enumerate(pts):
            inter = frozenset(range(len(pts)))
            for t in tight_of[i]:
                inter &= t
            if inter == {i}:
                verts.append(p)
        self.vertices = tuple(verts)
        vindex = {p: k for k, p in enumerate(verts)}
        out = []
        for c0, c, tight in facets:
            u = self._frame.lift(c)
            # c.y >= -c0  <=>  u.x >= u.origin - c0
            offset = dot(u, self._frame.origin) - c0
            vt = frozenset(vindex[pts[i]] for i in tight if pts[i] in vindex)
            out.append((u, offset, vt))
        self._facets = tuple(sorted(out))

    @property
    def facets(self) -> tuple:
        """Tuples ``(normal, offset, vertex_indices)`` with ``normal . x >= offset``.

        Normals are primitive inner normals relative to the affine span.
        """
        return self._facets

    @property
    def equations(self) -> list:
        """Pairs ``(u, c)`` with ``u . x == c`` on the affine span."""
        o = self._frame.origin
        return [(u, dot(u, o)) for u in self._frame.equations()]

    @property
    def frame(self) -> LatticeFrame:
        return self._frame

    def contains(self, x) -> bool:
        x = tuple(x)
        return (all(dot(u, x) == c for u, c in self.equations)
                and all(dot(u, x) >= b for u, b, _ in self._facets))

    def min_value(self, u) -> Fraction:
        return min(dot(u, v) for v in self.vertices)

    def translate(self, t):
        return LatticePolytope(tuple(a + b for a, b in zip(v, t)) for v in self.vertices)

    @cached_property
    def bounding_box(self):
        return [(min(v[i] for v in self.vertices), max(v[i] for v in self.vertices))
                for i in range(self.rank)]

    def __eq__(self, other):
        return isinstance(other, LatticePolytope) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return f"LatticePolytope(vertices={list(self.vertices)}, dim={self.dim})"


@dataclass(frozen=True)
class Face:
    """A nonempty face of a lattice polytope.

    ``functional`` attains its minimum over the polytope exactly on the face.
    """

    vertices: tuple
    functional: tuple
    dim: int
    polytope: LatticePolytope = field(compare=False, repr=False)

    def contains(self, x) -> bool:
        return (self.polytope.contains(x)
                and dot(self.functional, x) == self.polytope.min_value(self.functional))


def newton_polytope(f: LaurentPolynomial) -> LatticePolytope:
    """Convex hull of the exponent vectors of ``f``."""
    return LatticePolytope(f.support)


def _scan(bounds, ineqs, prefix, out):
    """Depth-first box scan; prunes prefixes that no completion can satisfy."""
    k = len(prefix)
    n = len(bounds)
    for u, b in ineqs:
        best = sum(a * x for a, x in zip(u, prefix))
        best += sum(max(u[j] * bounds[j][0], u[j] * bounds[j][1]) for j in range(k, n))
        if best < b:
            return
    if k == n:
        out.append(tuple(prefix))
        return
    lo, hi = bounds[k]
    for x in range(lo, hi + 1):
        prefix.append(x)
        _scan(bounds, ineqs, prefix, out)
        prefix.pop()


def integer_points(ineqs, bounds) -> list:
    """Integer points of a box satisfying ``u . x >= b`` for all ``(u, b)``.

    Bounds may be rational; they are rounded inward.
    """
    box = [(ceil(lo), floor(hi)) for lo, hi in bounds]
    if any(lo > hi for lo, hi in box):
        return []
    out: list = []
    _scan(box, list(ineqs), [], out)
    return out


def lattice_points(p: LatticePolytope) -> list:
    """All points of ``Z^n`` in ``p``, in lexicographic order."""
    ineqs = [(u, b) for u, b, _ in p.facets]
    for u, c in p.equations:
        ineqs.append((u, c))
        ineqs.append((tuple(-x for x in u), -c))
    return integer_points(ineqs, p.bounding_box)


def dilate(p: LatticePolytope, n: int) -> LatticePolytope:
    if n < 1:
        raise ValueError("dilation factor must be a positive integer")
    return LatticePolytope(tuple(n * x for x in v) for v in p.vertices)


def faces(p: LatticePolytope) -> list:
    """The complete face lattice of ``p``, ordered by dimension then vertices."""
    nv = len(p.vertices)
    full = frozenset(range(nv))
    vsets = close_under_intersection(full, [t for _, _, t in p.facets])
    vsets.discard(frozenset())
    out = []
    for s in vsets:
        functional = [0] * p.rank
        for u, _, t in p.facets:
            if s <= t:
                functional = [a + b for a, b in zip(functional, u)]
        verts = tuple(p.vertices[i] for i in sorted(s))
        out.append(Face(verts, tuple(functional), affine_rank(verts), p))
    out.sort(key=lambda f: (f.dim, f.vertices))
    return out


def ueno_stabilizer(f: LaurentPolynomial) -> list:
    """Cocharacters ``chi`` of ``Z^n`` for which ``f(s^chi x)`` is a monomial multiple of ``f``.

    The result is an HNF basis of the saturated sublattice orthogonal to the
    differences of exponents of ``f``; its rank is ``n - dim(Newton polytope)``.
    """
    verts = newton_polytope(f).vertices
    v0 = verts[0]
    diffs = [tuple(a - b for a, b in zip(v, v0)) for v in verts[1:]]
    return [tuple(r) for r in kernel_basis(diffs, ncols=f.rank)]


def quotient_by_stabilizer(f: LaurentPolynomial):
    """Rewrite ``f`` on the quotient torus by its stabilizer.

    Returns ``(g, frame)`` where ``g`` has rank ``dim(Newton polytope)`` and
    ``frame`` maps exponents of ``f`` (shifted by the least vertex) to
    exponents of ``g``. ``g`` and ``f`` differ by a monomial factor and a
    change of torus coordinates. For a monomial ``f`` the quotient torus is
    trivial and ``g`` is ``None``.
    """
    p = newton_polytope(f)
    frame = p.frame
    if frame.dim == 0:
        return None, frame
    return LaurentPolynomial({frame.coords(e): c for e, c in f.terms.items()}), frame
