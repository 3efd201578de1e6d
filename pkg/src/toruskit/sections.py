"""Global sections of torus-invariant divisors and (log) Kodaira dimensions."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, gcd, lcm

from sympy.solvers.simplex import InfeasibleLPError, UnboundedLPError, linprog

from ._geometry import affine_rank, solve
from .errors import IncompleteFan, StabilizerNotTrivial
from .lattice import dot, rank
from .newton import LaurentPolynomial, integer_points, newton_polytope, quotient_by_stabilizer, ueno_stabilizer
from .resolve import log_canonical_boundary, pullback_divisor, resolve_to_smooth
from .toricfan import TorusInvariantDivisor, completion_fan, divisor_closure

__all__ = [
    "SectionPolytope",
    "KodairaReport",
    "MINUS_INFINITY",
    "DEFAULT_M_MAX",
    "h0",
    "section_polytope",
    "d_dimension",
    "is_big_double",
    "log_kodaira_dimension",
]

MINUS_INFINITY = float("-inf")
DEFAULT_M_MAX = 8


@dataclass(frozen=True)
class SectionPolytope:
    """``{u : <u, r> >= -m a_r}`` for a divisor ``sum a_r D_r`` on a complete fan.

    ``inequalities`` keeps only the irredundant constraints; ``vertices``
    are exact rational points.
    """

    divisor: TorusInvariantDivisor
    m: int
    inequalities: tuple
    vertices: tuple

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @property
    def dim(self) -> int:
        return affine_rank(self.vertices)

    @property
    def denominator(self) -> int:
        """Least ``k`` with ``k`` times every vertex integral (1 if empty)."""
        return lcm(1, *(x.denominator for v in self.vertices for x in v))

    def bounds(self) -> list:
        n = self.divisor.fan.rank
        return [(min(v[i] for v in self.vertices), max(v[i] for v in self.vertices)) for i in range(n)]

    def lattice_points(self) -> list:
        if self.is_empty:
            return []
        return integer_points(self.inequalities, self.bounds())

    def count(self) -> int:
        return len(self.lattice_points())


def _lp_min(c, rows, rhs):
    """Exact ``min c.u`` subject to ``rows u >= rhs``; ``None`` when infeasible."""
    a = [[-x for x in r] + list(r) for r in rows]
    try:
        value, _ = linprog(list(c) + [-x for x in c], a, [-b for b in rhs])
    except InfeasibleLPError:
        return None
    return Fraction(int(value.p), int(value.q))


def _irredundant(ineqs) -> tuple:
    """Drop constraints implied by the others (first copy of duplicates kept)."""
    best: dict = {}
    for u, b in ineqs:
        best[u] = max(best.get(u, b), b)
    keep = sorted(best.items())
    i = 0
    while i < len(keep) and len(keep) > 1:
        u, b = keep[i]
        rest = keep[:i] + keep[i + 1:]
        try:
            low = _lp_min(u, [r for r, _ in rest], [c for _, c in rest])
        except UnboundedLPError:
            i += 1
            continue
        if low is None:  # already infeasible without this constraint
            return tuple(keep)
        if low >= b:
            keep = rest
        else:
            i += 1
    return tuple(keep)


def _vertices(ineqs, n: int) -> tuple:
    found = set()
    for combo in combinations(ineqs, n):
        rows = [u for u, _ in combo]
        if rank(rows) < n:
            continue
        x = solve(rows, [b for _, b in combo])
        if all(dot(u, x) >= b for u, b in ineqs):
            found.add(x)
    return tuple(sorted(found))


@lru_cache(maxsize=256)
def _base(d: TorusInvariantDivisor) -> tuple:
    ineqs = _irredundant(d.section_inequalities(1))
    return ineqs, _vertices(ineqs, d.fan.rank)


def section_polytope(d: TorusInvariantDivisor, m: int = 1) -> SectionPolytope:
    if not d.fan.is_complete():
        raise IncompleteFan("section polytopes are bounded only for complete fans")
    if m < 1:
        raise ValueError("m must be a positive integer")
    ineqs, verts = _base(d)
    return SectionPolytope(d, m, tuple((u, m * b) for u, b in ineqs),
                           tuple(tuple(m * x for x in v) for v in verts))


def h0(d: TorusInvariantDivisor, m: int = 1) -> int:
    """Dimension of the space of global sections of ``O(mD)``: a lattice point count."""
    return section_polytope(d, m).count()


@dataclass(frozen=True)
class KodairaReport:
    """Outcome of a Kodaira-type dimension computation.

    ``kappa`` is an int or :data:`MINUS_INFINITY`. ``growth_degree`` is the
    degree of the lattice-point count along multiples of ``m0`` times the
    vertex denominator, found by exact finite differences; it is a second,
    independent route to ``kappa``.
    """

    kappa: float | int
    m0: int | None
    samples: tuple
    methods: tuple
    rank: int
    cap: int
    growth_degree: int | None = None
    details: dict = field(default_factory=dict, compare=False)

    @property
    def big(self) -> bool:
        return self.kappa == self.rank

    @property
    def is_minus_infinity(self) -> bool:
        return self.kappa == MINUS_INFINITY


def _ehrhart_degree(d: TorusInvariantDivisor, step: int, n: int) -> int:
    vals = [1] + [h0(d, step * j) for j in range(1, n + 1)]
    deg = 0
    for k in range(1, n + 1):
        diff = sum((-1) ** (k - i) * comb(k, i) * vals[i] for i in range(k + 1))
        if diff:
            deg = k
    return deg


def d_dimension(d: TorusInvariantDivisor, m_max: int = DEFAULT_M_MAX) -> KodairaReport:
    """``kappa(X, D)`` from the dimension of the section polytope.

    ``m0`` is the gcd of the sampled ``m <= m_max`` with sections. With no
    sections at all up to ``m_max`` the report says minus infinity, which is
    only a statement up to that cap.
    """
    if m_max < 1:
        raise ValueError("m_max must be positive")
    samples = tuple((m, h0(d, m)) for m in range(1, m_max + 1))
    n = d.fan.rank
    good = [m for m, h in samples if h > 0]
    if not good:
        return KodairaReport(MINUS_INFINITY, None, samples, ("section-count",), n, m_max)
    m0 = 0
    for m in good:
        m0 = gcd(m0, m)
    poly = section_polytope(d, m0 * m_max)
    kappa = poly.dim
    degree = _ehrhart_degree(d, m0 * section_polytope(d, m0).denominator, n)
    return KodairaReport(kappa, m0, samples, ("section-polytope-dimension", "ehrhart-differences"),
                         n, m_max, degree)


def is_big_double(dbar: TorusInvariantDivisor, m_max: int = DEFAULT_M_MAX) -> bool:
    """Whether twice the closure divisor of ``f`` is big; requires a trivial stabilizer."""
    if dbar.source is None:
        raise ValueError("expected a divisor produced by divisor_closure")
    if ueno_stabilizer(dbar.source):
        raise StabilizerNotTrivial("the translation stabilizer of (f) is not trivial")
    return d_dimension(dbar * 2, m_max).kappa == dbar.fan.rank


def log_kodaira_dimension(f: LaurentPolynomial, cross_check: bool = True,
                          m_max: int = DEFAULT_M_MAX) -> KodairaReport:
    """Logarithmic Kodaira dimension of the complement of ``(f)`` in the torus.

    It equals the dimension of the Newton polytope, since the stabilizer
    subtorus has dimension ``rank - dim``. With ``cross_check`` the value is
    recomputed on the quotient torus through the completion, a smooth
    refinement and the section count of ``K + boundary + closure``.
    """
    p = newton_polytope(f)
    kappa = p.dim
    methods = ["newton-dimension"]
    samples: tuple = ()
    details: dict = {"stabilizer_rank": f.rank - p.dim}
    degree = None
    if cross_check:
        g, _ = quotient_by_stabilizer(f)
        if g is None:
            methods.append("monomial")
            details["cross_check_kappa"] = 0
        else:
            fan = completion_fan(newton_polytope(g))
            sub = resolve_to_smooth(fan)
            dbar = pullback_divisor(divisor_closure(g, fan), sub)
            lc = log_canonical_boundary(sub.target)
            report = d_dimension(lc.total + dbar, m_max)
            methods.append("resolved-section-count")
            samples = report.samples
            degree = report.growth_degree
            details["cross_check_kappa"] = report.kappa
            details["inserted_rays"] = len(sub.inserted)
        details["consistent"] = details["cross_check_kappa"] == kappa
    return KodairaReport(kappa, 1, samples, tuple(methods), f.rank, m_max, degree, details)
