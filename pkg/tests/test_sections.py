import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import random_polynomials
from oracles import brute_h0
from toruskit import LatticePolytope, LaurentPolynomial
from toruskit.errors import IncompleteFan, StabilizerNotTrivial
from toruskit.newton import newton_polytope, ueno_stabilizer
from toruskit.resolve import log_canonical_boundary, pullback_divisor, resolve_to_smooth
from toruskit.sections import (MINUS_INFINITY, d_dimension, h0, is_big_double, log_kodaira_dimension,
                               section_polytope)
from toruskit.toricfan import Fan, TorusInvariantDivisor, completion_fan, divisor_closure

SQUARE = LatticePolytope([(0, 0), (1, 0), (0, 1), (1, 1)])
SIMPLEX = LatticePolytope([(0, 0), (1, 0), (0, 1)])
P1 = completion_fan(LatticePolytope([(0,), (1,)]))


def _closure(terms):
    f = LaurentPolynomial(terms)
    return divisor_closure(f, completion_fan(newton_polytope(f)))


SQUARE_CLASS = _closure({(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1})
SIMPLEX_CLASS = _closure({(0, 0): 1, (1, 0): 1, (0, 1): 1})
SEGMENT_CLASS = divisor_closure(LaurentPolynomial({(0,): 1, (1,): 1}), P1)
FIBER_CLASS = TorusInvariantDivisor(SQUARE_CLASS.fan, {(-1, 0): 1, (1, 0): 0, (0, 1): 0, (0, -1): 0})
ZERO = TorusInvariantDivisor.zero(SQUARE_CLASS.fan)

FIXTURES = {
    "square": (SQUARE_CLASS, 2),
    "simplex": (SIMPLEX_CLASS, 2),
    "segment": (SEGMENT_CLASS, 1),
    "fiber": (FIBER_CLASS, 1),
    "zero": (ZERO, 0),
    "negative": (-SIMPLEX_CLASS, MINUS_INFINITY),
    "triangle": (_closure({(0, 0): 1, (3, 1): 1, (1, 3): 1}), 2),
}


@pytest.mark.parametrize("m", range(1, 7))
def test_h0_closed_forms(m):
    assert h0(SQUARE_CLASS, m) == (m + 1) ** 2
    assert h0(SIMPLEX_CLASS, m) == (m + 1) * (m + 2) // 2
    assert h0(ZERO, m) == 1
    assert h0(SEGMENT_CLASS, m) == m + 1


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_h0_matches_box_scan(name):
    d, _ = FIXTURES[name]
    for m in range(1, 7):
        assert h0(d, m) == brute_h0(d, m, 4 * m), m


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_d_dimension_fixtures(name):
    d, kappa = FIXTURES[name]
    r = d_dimension(d)
    assert r.kappa == kappa
    if kappa == MINUS_INFINITY:
        assert r.m0 is None and r.is_minus_infinity
    else:
        assert r.m0 == 1
        assert r.growth_degree == kappa
    assert r.big == (kappa == d.fan.rank)


def test_section_polytope_needs_complete_fan():
    with pytest.raises(IncompleteFan):
        h0(TorusInvariantDivisor.zero(Fan([[(1, 0), (0, 1)]], 2)))


def test_rational_vertices_and_m0():
    # weighted projective plane P(1,1,2): D at the weight-2 ray has half-integral vertices
    fan = Fan([[(1, 0), (0, 1)], [(0, 1), (-1, -2)], [(-1, -2), (1, 0)]], 2)
    d = TorusInvariantDivisor(fan, {(-1, -2): 1, (1, 0): 0, (0, 1): 0})
    poly = section_polytope(d, 1)
    assert poly.denominator == 2
    r = d_dimension(d)
    assert r.kappa == 2 and r.growth_degree == 2
    for m in range(1, 7):
        assert h0(d, m) == brute_h0(d, m, 2 * m)


small = st.dictionaries(st.sampled_from([(1, 0), (0, 1), (-1, -1)]), st.integers(-2, 3))


@settings(max_examples=40)
@given(small, st.integers(1, 3), st.integers(1, 3))
def test_section_counts_are_superadditive(coeffs, a, b):
    fan = SIMPLEX_CLASS.fan
    d = TorusInvariantDivisor(fan, {r: coeffs.get(r, 0) for r in fan.rays})
    ha, hb, hab = h0(d, a), h0(d, b), h0(d, a + b)
    if ha and hb:
        assert hab >= max(ha, hb)
        assert hab >= ha + hb - 1


def test_is_big_double_examples():
    assert is_big_double(SEGMENT_CLASS)
    assert is_big_double(SQUARE_CLASS)
    f = LaurentPolynomial({(1, 0): 1, (0, 1): -1})
    fan = Fan([[(1, 1), (1, -1)], [(1, -1), (-1, -1)], [(-1, -1), (-1, 1)], [(-1, 1), (1, 1)]], 2)
    with pytest.raises(StabilizerNotTrivial):
        is_big_double(divisor_closure(f, fan))
    with pytest.raises(ValueError):
        is_big_double(ZERO)


def test_log_kodaira_examples():
    r = log_kodaira_dimension(LaurentPolynomial({(1, 0): 1, (0, 1): -1}))
    assert r.kappa == 1 and r.details["consistent"]
    assert log_kodaira_dimension(LaurentPolynomial({(2, 5): 3})).kappa == 0
    full = log_kodaira_dimension(LaurentPolynomial({(0, 0): 1, (1, 0): 1, (0, 1): 1}))
    assert full.kappa == 2 and full.big and full.details["consistent"]


@pytest.mark.parametrize("f", random_polynomials(24), ids=str)
def test_log_kodaira_across_corpus(f):
    r = log_kodaira_dimension(f)
    p = newton_polytope(f)
    assert r.kappa + len(ueno_stabilizer(f)) == f.rank
    assert r.details["consistent"]
    assert (r.kappa == f.rank) == (p.dim == f.rank)
    assert (r.kappa == 0) == (len(f.support) == 1)
    if r.growth_degree is not None:
        assert r.growth_degree == r.kappa


def test_resolved_count_matches_box_scan():
    f = LaurentPolynomial({(0, 0): 1, (3, 1): 1, (1, 3): -2})
    fan = completion_fan(newton_polytope(f))
    sub = resolve_to_smooth(fan)
    total = log_canonical_boundary(sub.target).total + pullback_divisor(divisor_closure(f, fan), sub)
    for m in range(1, 7):
        assert h0(total, m) == brute_h0(total, m, 3 * m)
