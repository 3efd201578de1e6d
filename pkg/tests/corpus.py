"""Seeded random polytopes and polynomials shared by the test modules."""
import random
from fractions import Fraction

from toruskit import LatticePolytope, LaurentPolynomial
from toruskit.heights import RationalTorusPoint

SEED = 20240611


def random_polynomials(count=24, seed=SEED, max_rank=3, max_coord=4):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(1, max_rank)
        k = rng.randint(1, n + 3)
        pts = {tuple(rng.randint(0, max_coord) for _ in range(n)) for _ in range(k)}
        coeffs = [rng.choice([-3, -2, -1, 1, 2, 3]) for _ in pts]
        out.append(LaurentPolynomial(dict(zip(sorted(pts), coeffs))))
    return out


def random_polytopes(count=24, seed=SEED, **kw):
    return [LatticePolytope(f.support) for f in random_polynomials(count, seed, **kw)]


def full_dimensional(polys):
    return [f for f in polys if LatticePolytope(f.support).dim == f.rank]


def random_point_pairs(count, seed=7):
    """Pairs ``(f, P)`` with ``f(P) != 0``; exponents may be negative."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(1, 3)
        terms = {tuple(rng.randint(-2, 3) for _ in range(n)): rng.choice([-3, -1, 1, 2, 5])
                 for _ in range(rng.randint(1, 4))}
        f = LaurentPolynomial(terms)
        P = RationalTorusPoint([Fraction(rng.choice([-1, 1]) * rng.randint(1, 30), rng.randint(1, 30))
                                for _ in range(n)])
        if f(P.coords) != 0:
            out.append((f, P))
    return out
