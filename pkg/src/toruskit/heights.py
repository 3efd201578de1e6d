"""Heights, local Weil functions and S-integral points on split tori over Q.

Every local value over Q is ``log`` of a positive rational, hence a rational
combination of ``log p`` over primes ``p``. :class:`LogValue` stores exactly
that combination, so sums over places are compared without tolerance.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from itertools import combinations, product
from math import lcm

import mpmath
from sympy import factorint, isprime

from .errors import BoundTooLarge, OnDivisor, RankMismatch, Unbounded
from .lattice import dot, kernel_basis, primitive, rank
from .newton import LatticePolytope, LaurentPolynomial, newton_polytope
from .toricfan import MonomialMap

__all__ = [
    "INFINITY",
    "LogValue",
    "RationalTorusPoint",
    "PlaceSet",
    "LocalValue",
    "DecompositionReport",
    "FunctorialityBound",
    "CosetFamily",
    "DEFAULT_EXPONENT_CAP",
    "abs_value",
    "log_abs",
    "height",
    "coordinate_height",
    "weil_function",
    "weil_lower_bound",
    "height_decomposition_check",
    "boundary_components",
    "boundary_distance",
    "functoriality_bound",
    "is_s_integral",
    "enumerate_integral_points",
    "detect_coset_families",
]

INFINITY = "inf"
DEFAULT_EXPONENT_CAP = 12
_PREC = 128


@total_ordering
class LogValue:
    """Exact real number ``sum_p c_p log p`` with rational ``c_p``."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for p, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[int(p)] = c
        self.terms = dict(sorted(clean.items()))

    @classmethod
    def log(cls, x) -> "LogValue":
        """``log x`` for a positive rational ``x``."""
        x = Fraction(x)
        if x <= 0:
            raise ValueError("log of a non-positive number")
        terms: dict = {}
        for p, e in factorint(x.numerator).items():
            terms[p] = terms.get(p, 0) + e
        for p, e in factorint(x.denominator).items():
            terms[p] = terms.get(p, 0) - e
        return cls(terms)

    @classmethod
    def zero(cls) -> "LogValue":
        return cls()

    def exp_power(self) -> tuple:
        """``(k, r)`` with ``k * self == log r`` for the least positive integer ``k``."""
        k = lcm(1, *(c.denominator for c in self.terms.values()))
        r = Fraction(1)
        for p, c in self.terms.items():
            r *= Fraction(p) ** int(c * k)
        return k, r

    def sign(self) -> int:
        _, r = self.exp_power()
        return (r > 1) - (r < 1)

    def __add__(self, other):
        other = _as_log(other)
        out = dict(self.terms)
        for p, c in other.terms.items():
            out[p] = out.get(p, 0) + c
        return LogValue(out)

    __radd__ = __add__

    def __neg__(self):
        return LogValue({p: -c for p, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_log(other))

    def __rsub__(self, other):
        return _as_log(other) - self

    def __mul__(self, k):
        k = Fraction(k)
        return LogValue({p: k * c for p, c in self.terms.items()})

    __rmul__ = __mul__

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def to_mpf(self, prec: int = _PREC):
        with mpmath.workprec(prec):
            return mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator * mpmath.log(p)
                               for p, c in self.terms.items())

    def __float__(self):
        return float(self.to_mpf())

    def _cmp_real(self, x) -> int:
        """Sign of ``self - x`` for a float or int ``x``, by interval evaluation."""
        if not self.terms:
            return (0 > x) - (0 < x)
        iv = mpmath.iv
        saved = iv.prec
        prec = _PREC
        try:
            while prec <= 8 * _PREC:
                iv.prec = prec
                total = iv.mpf(0)
                for p, c in self.terms.items():
                    total += iv.mpf(c.numerator) / c.denominator * iv.log(p)
                if isinstance(x, Fraction):
                    target = iv.mpf(x.numerator) / x.denominator
                else:
                    target = iv.mpf(x)
                diff = total - target
                if diff.a > 0:
                    return 1
                if diff.b < 0:
                    return -1
                prec *= 2
        finally:
            iv.prec = saved
        # a nonzero combination of logs of primes is transcendental, so only an
        # exact float coincidence could reach this point
        return 0

    def compare(self, other) -> int:
        if isinstance(other, LogValue):
            return (self - other).sign()
        return self._cmp_real(other)

    def __eq__(self, other):
        if isinstance(other, LogValue):
            return self.terms == other.terms
        if isinstance(other, (int, float, Fraction)):
            return self.compare(other) == 0
        return NotImplemented

    def __lt__(self, other):
        return self.compare(other) < 0

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "LogValue(0)"
        body = " + ".join(f"{c}*log({p})" for p, c in self.terms.items())
        return f"LogValue({body})"


def _as_log(x) -> LogValue:
    if isinstance(x, LogValue):
        return x
    if x == 0:
        return LogValue()
    raise TypeError(f"cannot treat {x!r} as an exact logarithm")


def _primes_of(x: Fraction) -> set:
    x = Fraction(x)
    return set(factorint(abs(x.numerator))) | set(factorint(x.denominator))


def _parse_rational(x) -> Fraction:
    if isinstance(x, dict):
        return Fraction(int(x["num"]), int(x.get("den", 1)))
    return Fraction(x)


class RationalTorusPoint:
    """A point of ``G_m^n(Q)``: a tuple of nonzero rationals."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        cs = tuple(_parse_rational(c) for c in coords)
        if not cs:
            raise ValueError("a torus point needs at least one coordinate")
        if any(c == 0 for c in cs):
            raise ValueError("torus points have nonzero coordinates")
        self.coords = cs

    @property
    def rank(self) -> int:
        return len(self.coords)

    def monomial(self, m) -> Fraction:
        out = Fraction(1)
        for x, k in zip(self.coords, m):
            out *= x ** k
        return out

    def __mul__(self, other):
        other = other if isinstance(other, RationalTorusPoint) else RationalTorusPoint(other)
        if other.rank != self.rank:
            raise RankMismatch("points of different rank")
        return RationalTorusPoint(a * b for a, b in zip(self.coords, other.coords))

    def primes(self) -> set:
        out = set()
        for c in self.coords:
            out |= _primes_of(c)
        return out

    def sort_key(self):
        return self.coords

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __eq__(self, other):
        return isinstance(other, RationalTorusPoint) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"RationalTorusPoint({[str(c) for c in self.coords]})"


def _as_point(p) -> RationalTorusPoint:
    return p if isinstance(p, RationalTorusPoint) else RationalTorusPoint(p)


def _check_place(v):
    if v == INFINITY or v == "∞":
        return INFINITY
    v = int(v)
    if not isprime(v):
        raise ValueError(f"{v} is not a prime")
    return v


class PlaceSet:
    """The archimedean place together with finitely many primes."""

    def __init__(self, primes=()):
        self.primes = tuple(sorted({_check_place(p) for p in primes if p not in (INFINITY, "∞")}))

    @property
    def places(self) -> tuple:
        return (INFINITY,) + self.primes

    def __contains__(self, v):
        return v in (INFINITY, "∞") or v in self.primes

    def is_unit(self, x) -> bool:
        """Whether the rational ``x`` is an S-unit."""
        x = Fraction(x)
        if x == 0:
            return False
        return _primes_of(x) <= set(self.primes)

    def __eq__(self, other):
        return isinstance(other, PlaceSet) and self.primes == other.primes

    def __hash__(self):
        return hash(self.primes)

    def __repr__(self):
        return f"PlaceSet(inf, {list(self.primes)})"


@dataclass(frozen=True)
class LocalValue:
    place: object
    value: LogValue

    def __float__(self):
        return float(self.value)


def _ord(x: Fraction, p: int) -> int:
    n, d, k = x.numerator, x.denominator, 0
    while n % p == 0:
        n //= p
        k += 1
    while d % p == 0:
        d //= p
        k -= 1
    return k


def abs_value(x, v) -> Fraction:
    """``|x|_v`` (normalized so the product formula holds)."""
    x = Fraction(x)
    v = _check_place(v)
    if x == 0:
        return Fraction(0)
    if v == INFINITY:
        return abs(x)
    return Fraction(v) ** -_ord(x, v)


def log_abs(x, v) -> LogValue:
    x = Fraction(x)
    if x == 0:
        raise ValueError("log of zero")
    v = _check_place(v)
    if v == INFINITY:
        return LogValue.log(abs(x))
    return LogValue({v: -_ord(x, v)})


def _log_max(values, v) -> LogValue:
    return LogValue.log(max(abs_value(x, v) for x in values))


def _relevant_places(point: RationalTorusPoint, *extra) -> tuple:
    ps = point.primes()
    for x in extra:
        x = Fraction(x)
        if x:
            ps |= _primes_of(x)
    return (INFINITY,) + tuple(sorted(ps))


def height(P, p: LatticePolytope) -> LogValue:
    """Height of the image of ``P`` under ``t -> [t^m : m in p]``.

    Only vertices matter since ``log |t^m|_v`` is linear in ``m``. Places
    where every coordinate is a unit contribute nothing.
    """
    P = _as_point(P)
    if p.rank != P.rank:
        raise RankMismatch("point and polytope ranks differ")
    vals = [P.monomial(m) for m in p.vertices]
    total = LogValue()
    for v in _relevant_places(P):
        total = total + _log_max(vals, v)
    return total


def coordinate_height(x) -> LogValue:
    """``h(x) = log max(|a|, |b|)`` for ``x = a/b`` in lowest terms."""
    x = Fraction(x)
    return LogValue.log(max(abs(x.numerator), x.denominator))


def weil_function(f: LaurentPolynomial, P, v) -> LocalValue:
    """``log max_m |P^m|_v - log |f(P)|_v`` over the monomials of the Newton polytope."""
    P = _as_point(P)
    if P.rank != f.rank:
        raise RankMismatch("point and polynomial ranks differ")
    value = f(P.coords)
    if value == 0:
        raise OnDivisor(f"f vanishes at {P!r}")
    v = _check_place(v)
    vals = [P.monomial(m) for m in newton_polytope(f).vertices]
    return LocalValue(v, _log_max(vals, v) - log_abs(value, v))


def weil_lower_bound(f: LaurentPolynomial, v) -> LogValue:
    """A constant below every value of :func:`weil_function` at ``v``."""
    v = _check_place(v)
    cs = list(f.terms.values())
    if v == INFINITY:
        return -LogValue.log(sum(abs(c) for c in cs))
    return -_log_max(cs, v)


@dataclass(frozen=True)
class DecompositionReport:
    local: dict
    weil_sum: LogValue
    height: LogValue
    holds: bool


def height_decomposition_check(f: LaurentPolynomial, P) -> DecompositionReport:
    """Sum of local Weil values over all places versus the height, exactly."""
    P = _as_point(P)
    value = f(P.coords)
    if value == 0:
        raise OnDivisor(f"f vanishes at {P!r}")
    local = {v: weil_function(f, P, v).value for v in _relevant_places(P, value)}
    total = LogValue()
    for x in local.values():
        total = total + x
    h = height(P, newton_polytope(f))
    return DecompositionReport(local, total, h, total == h)


def boundary_components(P, v) -> tuple:
    """Per-coordinate distances ``|log |x_k|_v|`` to the boundary of ``(P^1)^n``."""
    P = _as_point(P)
    return tuple(abs(log_abs(x, v)) for x in P.coords)


def boundary_distance(P, v) -> LocalValue:
    total = LogValue()
    for x in boundary_components(P, v):
        total = total + x
    return LocalValue(_check_place(v), total)


@dataclass(frozen=True)
class FunctorialityBound:
    """``h_dst(theta(P)) <= C h_src(P) + c`` for every rational torus point."""

    C: Fraction
    c: Fraction


def functoriality_bound(theta: MonomialMap, p_src: LatticePolytope,
                        p_dst: LatticePolytope) -> FunctorialityBound:
    """Least ``C`` with ``theta^T(p_dst)`` inside a translate of ``C p_src``; ``c`` is 0.

    Both heights are sums over places of support functions evaluated at the
    vector of ``log |x_k|_v``; the translate contributes a character whose
    local logs sum to zero by the product formula, hence ``c = 0``. The
    least ``C`` comes from Farkas' lemma: the translate exists iff
    ``G - C B >= 0`` for every circuit of positive relations among the facet
    normals of ``p_src``, where ``G`` and ``B`` combine the minima over the
    image polytope and the facet offsets.
    """
    if theta.source_rank != p_src.rank or theta.target_rank != p_dst.rank:
        raise RankMismatch("map ranks do not match the polytopes")
    cols = list(zip(*theta.matrix))
    image = sorted({tuple(dot(col, m) for col in cols) for m in p_dst.vertices})
    frame = p_src.frame
    q0 = image[0]
    if any(not frame.in_span(tuple(o + a - b for o, a, b in zip(frame.origin, q, q0))) for q in image):
        raise Unbounded("image characters leave the span of the source polytope")
    if len(image) == 1 or p_src.dim == 0:
        return FunctorialityBound(Fraction(0), Fraction(0))
    o = frame.origin
    ys = [frame.coords(tuple(oo + a - b for oo, a, b in zip(o, q, q0))) for q in image]
    normals, offsets, mins = [], [], []
    for u, b, _ in p_src.facets:
        ubar = tuple(dot(u, e) for e in frame.basis)
        normals.append(ubar)
        offsets.append(Fraction(b - dot(u, o)))
        mins.append(Fraction(min(dot(ubar, y) for y in ys)))
    best = Fraction(0)
    n = len(normals)
    d = frame.dim
    for size in range(2, d + 2):
        for J in combinations(range(n), size):
            rows = [normals[j] for j in J]
            if rank(rows) != size - 1:
                continue
            ker = kernel_basis([[rows[j][i] for j in range(size)] for i in range(d)], ncols=size)
            if len(ker) != 1:
                continue
            lam = ker[0]
            if all(x < 0 for x in lam):
                lam = tuple(-x for x in lam)
            if not all(x > 0 for x in lam):
                continue
            G = sum(l * mins[j] for l, j in zip(lam, J))
            B = sum(l * offsets[j] for l, j in zip(lam, J))
            if B < 0:
                best = max(best, G / B)
    return FunctorialityBound(best, Fraction(0))


def is_s_integral(f: LaurentPolynomial, P, S: PlaceSet) -> bool:
    """Coordinates and ``f(P)`` are all S-units."""
    P = _as_point(P)
    if P.rank != f.rank:
        raise RankMismatch("point and polynomial ranks differ")
    return all(S.is_unit(x) for x in P.coords) and S.is_unit(f(P.coords))


def _exponent_limit(p: int, bound) -> int:
    e = 0
    while True:
        nxt = LogValue({p: e + 1})
        if nxt.compare(bound) > 0:
            return e
        e += 1
        if e > 10_000:
            raise BoundTooLarge("height bound is far too large")


def _bounded_units(S: PlaceSet, bound, cap: int) -> list:
    limits = []
    for p in S.primes:
        e = _exponent_limit(p, bound)
        if e > cap:
            raise BoundTooLarge(f"exponent {e} for prime {p} exceeds the cap {cap}")
        limits.append(range(-e, e + 1))
    out = []
    for exps in product(*limits):
        x = Fraction(1)
        for p, e in zip(S.primes, exps):
            x *= Fraction(p) ** e
        if coordinate_height(x).compare(bound) <= 0:
            out.extend((x, -x))
    return sorted(out)


def enumerate_integral_points(f: LaurentPolynomial, S: PlaceSet, height_bound,
                              exponent_cap: int = DEFAULT_EXPONENT_CAP) -> list:
    """S-integral points of the complement of ``(f)`` with every coordinate height bounded.

    ``height_bound`` is a :class:`LogValue` (exact) or a real number in
    natural-log units. Coordinates range over S-units ``x`` with
    ``h(x) <= height_bound``; points are returned in lexicographic order.
    """
    if f.rank > 3:
        raise ValueError("enumeration is limited to rank at most 3")
    if exponent_cap < 1:
        raise ValueError("exponent cap must be positive")
    if not isinstance(height_bound, LogValue) and height_bound < 0:
        return []
    if isinstance(height_bound, LogValue) and height_bound.sign() < 0:
        return []
    units = _bounded_units(S, height_bound, exponent_cap)
    out = []
    for coords in product(units, repeat=f.rank):
        if S.is_unit(f(coords)):
            out.append(RationalTorusPoint(coords))
    return out


@dataclass(frozen=True)
class CosetFamily:
    """Points on ``{x^character = constant}``; a lone point has no character."""

    character: tuple | None
    constant: Fraction | None
    points: tuple


def _pair_characters(P: RationalTorusPoint, Q: RationalTorusPoint) -> list:
    ratio = [a / b for a, b in zip(P.coords, Q.coords)]
    primes = sorted(P.primes() | Q.primes())
    rows = [[_ord(r, p) for r in ratio] for p in primes]
    rows = [r for r in rows if any(r)]
    n = len(ratio)
    basis = kernel_basis(rows, ncols=n) if rows else [tuple(int(i == j) for j in range(n)) for i in range(n)]
    if len(basis) == n:
        cands = list(basis) + [(1, 1), (1, -1)]
    else:
        cands = list(basis)
    out = []
    for chi in cands:
        chi = _normalize(primitive(chi))
        value = Fraction(1)
        for r, k in zip(ratio, chi):
            value *= r ** k
        if value == 1:
            out.append(chi)
    return out


def _normalize(chi) -> tuple:
    lead = next(x for x in chi if x)
    return tuple(chi) if lead > 0 else tuple(-x for x in chi)


def detect_coset_families(points) -> list:
    """Cover rank-2 points by cosets of one-dimensional subtori.

    Candidate characters come from pairs of points sharing a coset. Families
    are then chosen greedily, largest first, which gives a small cover but
    not always a minimum one. Points left alone become singleton families.
    """
    pts = sorted({_as_point(p) for p in points}, key=RationalTorusPoint.sort_key)
    if not pts:
        return []
    if any(p.rank != 2 for p in pts):
        raise ValueError("coset detection is implemented for rank 2 only")
    chars = set()
    for P, Q in combinations(pts, 2):
        chars.update(_pair_characters(P, Q))
    cosets = {}
    for chi in chars:
        for P in pts:
            cosets.setdefault((chi, P.monomial(chi)), []).append(P)
    remaining = set(pts)
    out = []
    while remaining:
        best = None
        for (chi, c), members in cosets.items():
            cover = [P for P in members if P in remaining]
            if len(cover) < 2:
                continue
            key = (-len(cover), chi, c)
            if best is None or key < best[0]:
                best = (key, chi, c)
        if best is None:
            break
        _, chi, c = best
        fam = tuple(P for P in cosets[(chi, c)] if P in remaining)
        out.append(CosetFamily(chi, c, fam))
        remaining -= set(fam)
    for P in sorted(remaining, key=RationalTorusPoint.sort_key):
        out.append(CosetFamily(None, None, (P,)))
    return out
