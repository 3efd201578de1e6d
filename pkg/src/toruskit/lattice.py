"""Exact integer lattice linear algebra.

Vectors are tuples of Python ints and matrices are tuples of row tuples, so
arithmetic never overflows and never touches floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import DependentInput

Vector = tuple
Matrix = tuple


def as_vector(v: Sequence[int]) -> Vector:
    if type(v) is tuple and all(type(x) is int for x in v):
        return v
    out = []
    for x in v:
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"non-integral entry {x}")
            x = x.numerator
        elif not isinstance(x, int):
            if float(x) != int(x):
                raise ValueError(f"non-integral entry {x}")
            x = int(x)
        out.append(int(x))
    return tuple(out)


def as_matrix(rows) -> Matrix:
    m = tuple(as_vector(r) for r in rows)
    if m and len({len(r) for r in m}) != 1:
        raise ValueError("ragged matrix")
    return m


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m)) if m else ()


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def primitive(v: Sequence[int]) -> Vector:
    """Divide an integer vector by the gcd of its entries."""
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        return tuple(v)
    return tuple(x // g for x in v)


def determinant(m) -> int:
    """Determinant of a square integer matrix (Bareiss elimination)."""
    a = [list(r) for r in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rank(rows) -> int:
    """Rank over Q of a list of rational row vectors."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return 0
    r = 0
    ncols = len(a[0])
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, len(a)):
            if a[i][c] != 0:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return r


def inverse(m: Matrix) -> tuple:
    """Exact inverse of a square matrix as a tuple of Fraction rows."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        a[c] = [x / p for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return tuple(tuple(row[n:]) for row in a)


def integer_inverse(m: Matrix) -> Matrix:
    inv = inverse(m)
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return tuple(tuple(int(x) for x in row) for row in inv)


@dataclass(frozen=True)
class SmithDecomposition:
    """``left @ original @ right`` is diagonal with entries ``diag``."""

    left: Matrix
    diag: tuple
    right: Matrix

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diag if d != 0)

    def diagonal_matrix(self, shape) -> Matrix:
        r, c = shape
        return tuple(tuple(self.diag[i] if i == j and i < len(self.diag) else 0
                           for j in range(c)) for i in range(r))


def smith_normal_form(m) -> SmithDecomposition:
    """Smith normal form with unimodular transforms.

    Returns ``SmithDecomposition(left, diag, right)`` such that
    ``left @ m @ right`` is diagonal, the diagonal entries are nonnegative
    and each divides the next.
    """
    a = [list(r) for r in as_matrix(m)]
    if not a or not a[0]:
        raise ValueError("empty matrix")
    nr, nc = len(a), len(a[0])
    left = [list(r) for r in identity(nr)]
    right = [list(r) for r in identity(nc)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        a[dst] = [x - q * y for x, y in zip(a[dst], a[src])]
        left[dst] = [x - q * y for x, y in zip(left[dst], left[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for row in a:
            row[dst] -= q * row[src]
        for row in right:
            row[dst] -= q * row[src]

    for t in range(min(nr, nc)):
        nz = [(abs(a[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if a[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            clean = True
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(i, t, a[i][t] // a[t][t])
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(j, t, a[t][j] // a[t][t])
                    clean = clean and a[t][j] == 0
            if not clean:
                cands = [(abs(a[i][t]), i, t) for i in range(t + 1, nr) if a[i][t]]
                cands += [(abs(a[t][j]), t, j) for j in range(t + 1, nc) if a[t][j]]
                _, i, j = min(cands)
                if i != t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc)
                        if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], -1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            left[t] = [-x for x in left[t]]

    diag = tuple(a[i][i] for i in range(min(nr, nc)))
    return SmithDecomposition(as_matrix(left), diag, as_matrix(right))


def hermite_normal_form(rows) -> Matrix:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Zero rows are dropped; pivots are positive and entries above each pivot
    are reduced into ``[0, pivot)``.
    """
    a = [list(r) for r in as_matrix(rows)]
    if not a:
        return ()
    n = len(a[0])
    pr = 0
    for col in range(n):
        if pr >= len(a):
            break
        while True:
            nz = [i for i in range(pr, len(a)) if a[i][col] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(a[i][col]), i))
            a[pr], a[i0] = a[i0], a[pr]
            done = True
            for i in range(pr + 1, len(a)):
                if a[i][col]:
                    q = a[i][col] // a[pr][col]
                    a[i] = [x - q * y for x, y in zip(a[i], a[pr])]
                    done = done and a[i][col] == 0
            if done:
                break
        if a[pr][col] == 0:
            continue
        if a[pr][col] < 0:
            a[pr] = [-x for x in a[pr]]
        for i in range(pr):
            q = a[i][col] // a[pr][col]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[pr])]
        pr += 1
    return as_matrix(r for r in a[:pr] if any(r))


def kernel_basis(rows, ncols: int | None = None) -> Matrix:
    """Basis (HNF rows) of the integer vectors ``x`` with ``row . x == 0`` for all rows."""
    rows = as_matrix(rows)
    if not rows:
        if ncols is None:
            raise ValueError("ncols required for an empty matrix")
        return identity(ncols)
    n = len(rows[0])
    snf = smith_normal_form(rows)
    r = snf.rank
    cols = [tuple(snf.right[i][j] for i in range(n)) for j in range(r, n)]
    return hermite_normal_form(cols)


def saturate_sublattice(generators, ambient_rank: int | None = None) -> list:
    """Basis of the saturation of the sublattice spanned by ``generators``.

    The result spans ``span_Q(generators) ∩ Z^n`` and is returned as the
    rows of its Hermite normal form.
    """
    gens = [as_vector(g) for g in generators]
    if not gens or not any(any(g) for g in gens):
        return []
    n = len(gens[0])
    if ambient_rank is not None and ambient_rank != n:
        raise ValueError("generator length does not match ambient rank")
    perp = kernel_basis(gens)
    if not perp:
        return [tuple(r) for r in identity(n)]
    return [tuple(r) for r in kernel_basis(perp)]


def unimodular_completion(basis) -> Matrix:
    """Unimodular matrix whose first rows are ``basis``.

    ``basis`` must span a saturated sublattice; the remaining rows complete it
    to a basis of ``Z^n``.
    """
    b = as_matrix(basis)
    if not b:
        raise ValueError("empty basis")
    n = len(b[0])
    snf = smith_normal_form(b)
    if any(d != 1 for d in snf.diag):
        raise ValueError("basis does not span a saturated sublattice")
    d = len(b)
    linv = integer_inverse(snf.left)
    block = [list(r) + [0] * (n - d) for r in linv]
    block += [[0] * d + [int(i == j) for j in range(n - d)] for i in range(n - d)]
    return matmul(as_matrix(block), integer_inverse(snf.right))


def is_unimodular_extension(vectors) -> bool:
    """True iff ``vectors`` extend to a basis of ``Z^n``.

    Raises ``DependentInput`` when the vectors are linearly dependent.
    """
    vs = as_matrix(vectors)
    if not vs:
        return True
    snf = smith_normal_form(vs)
    if snf.rank < len(vs):
        raise DependentInput("vectors are linearly dependent")
    return all(d == 1 for d in snf.diag)


class LatticeFrame:
    """Integral coordinates on the affine lattice spanned by a point set.

    ``coords(x)`` returns the coordinates of ``x - origin`` in a basis of the
    saturated lattice spanned by the differences; ``lift(c)`` turns a linear
    functional on those coordinates into an integral functional on ``Z^n``
    that agrees with it on the span.
    """

    def __init__(self, points, origin=None):
        pts = [as_vector(p) for p in points]
        if not pts:
            raise ValueError("empty point set")
        self.ambient = len(pts[0])
        self.origin = as_vector(origin) if origin is not None else min(pts)
        diffs = [tuple(x - o for x, o in zip(p, self.origin)) for p in pts]
        self.basis = tuple(saturate_sublattice(diffs, self.ambient))
        self.dim = len(self.basis)
        n = self.ambient
        if self.dim:
            u = unimodular_completion(self.basis)
        else:
            u = identity(n)
        self._w = integer_inverse(u)

    def coords(self, x) -> Vector:
        y = tuple(sum((xi - oi) * self._w[i][j] for i, (xi, oi) in enumerate(zip(x, self.origin)))
                  for j in range(self.ambient))
        return y[: self.dim]

    def in_span(self, x) -> bool:
        y = tuple(sum((xi - oi) * self._w[i][j] for i, (xi, oi) in enumerate(zip(x, self.origin)))
                  for j in range(self.dim, self.ambient))
        return not any(y)

    def equations(self) -> list:
        """Integral functionals vanishing on the span (one per missing dimension)."""
        return [tuple(self._w[i][j] for i in range(self.ambient)) for j in range(self.dim, self.ambient)]

    def lift(self, c) -> Vector:
        return tuple(sum(self._w[i][j] * c[j] for j in range(self.dim)) for i in range(self.ambient))

    def point(self, y) -> tuple:
        """Inverse of ``coords``: the ambient point with the given coordinates."""
        return tuple(o + sum(yj * b[i] for yj, b in zip(y, self.basis))
                     for i, o in enumerate(self.origin))


def solve_integral(rows, rhs):
    """An integer solution of ``rows @ x == rhs`` or ``None`` if there is none."""
    a = as_matrix(rows)
    b = [Fraction(x) for x in rhs]
    if any(x.denominator != 1 for x in b):
        return None
    b = [int(x) for x in b]
    n = len(a[0])
    snf = smith_normal_form(a)
    lb = [sum(l * x for l, x in zip(row, b)) for row in snf.left]
    z = [0] * n
    for i, v in enumerate(lb):
        d = snf.diag[i] if i < len(snf.diag) else 0
        if d == 0:
            if v != 0:
                return None
        elif v % d:
            return None
        else:
            z[i] = v // d
    return tuple(sum(snf.right[i][j] * z[j] for j in range(n)) for i in range(n))
