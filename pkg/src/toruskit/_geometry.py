"""Exact facet and face enumeration for small cones and polytopes.

Facets are found by brute force over hyperplanes spanned by generators.
That is quadratic-to-cubic in the number of generators, which is fine at
the sizes this package targets (ambient rank up to about 6, a few dozen
generators).
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .lattice import LatticeFrame, determinant, dot, primitive, rank


def _normal(vectors, d):
    """Integer normal to ``d - 1`` vectors in ``Z^d`` (generalised cross product)."""
    n = []
    for j in range(d):
        minor = [tuple(v[k] for k in range(d) if k != j) for v in vectors]
        n.append((-1) ** j * determinant(minor))
    return tuple(n)


def cone_facets(gens):
    """Facets of the cone generated by integer vectors ``gens``.

    Returns ``(frame, facets)``. Each facet is ``(normal, tight)`` with
    ``normal`` an integral functional on the ambient lattice that is
    nonnegative on every generator and ``tight`` the frozenset of generator
    indices where it vanishes. When the cone is not full-dimensional the
    normal is only meaningful together with ``frame.equations()``. A cone
    equal to its own linear span has no facets.
    """
    gens = [tuple(g) for g in gens]
    n = len(gens[0])
    frame = LatticeFrame(gens + [(0,) * n], origin=(0,) * n)
    d = frame.dim
    if d == 0:
        return frame, []
    ys = [frame.coords(g) for g in gens]
    uniq = sorted({y for y in ys if any(y)})
    found = {}
    for combo in combinations(uniq, d - 1):
        nv = _normal(combo, d)
        if not any(nv):
            continue
        nv = primitive(nv)
        for s in (nv, tuple(-x for x in nv)):
            if s in found:
                continue
            vals = [dot(s, y) for y in ys]
            if min(vals) >= 0 and max(vals) > 0:
                found[s] = frozenset(i for i, v in enumerate(vals) if v == 0)
    return frame, sorted((frame.lift(s), t) for s, t in found.items())


def close_under_intersection(full: frozenset, facets) -> set:
    faces = {full}
    frontier = set(facets)
    while frontier:
        faces |= frontier
        new = set()
        for a in frontier:
            for b in faces:
                c = a & b
                if c not in faces:
                    new.add(c)
        frontier = new
    return faces


def affine_rank(points) -> int:
    pts = list(points)
    if not pts:
        return -1
    p0 = pts[0]
    return rank([tuple(Fraction(a) - Fraction(b) for a, b in zip(p, p0)) for p in pts[1:]])


def solve(rows, rhs):
    """One exact solution of ``rows @ x == rhs`` or ``None`` if inconsistent."""
    m = len(rows)
    if m == 0:
        return None
    n = len(rows[0])
    a = [[Fraction(x) for x in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    if any(a[i][n] != 0 for i in range(r, m)):
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = a[i][n]
    return tuple(x)
