import pytest

from corpus import random_polynomials, random_polytopes
from toruskit import LatticePolytope, LaurentPolynomial
from toruskit.errors import CapExceeded, IncompleteFan, NotSmooth, RayOutsideSupport
from toruskit.lattice import determinant
from toruskit.newton import newton_polytope
from toruskit.resolve import (Subdivision, log_canonical_boundary, pullback_divisor,
                              resolve_to_smooth, stellar_subdivision)
from toruskit.toricfan import Fan, TorusInvariantDivisor, completion_fan, divisor_closure, is_ample

SQUARE = LatticePolytope([(0, 0), (1, 0), (0, 1), (1, 1)])
SIMPLEX = LatticePolytope([(0, 0), (1, 0), (0, 1)])


def _unimodular(fan):
    return all(abs(determinant(list(c))) == 1 for c in fan.maximal_cones if len(c) == fan.rank)


def test_stellar_examples():
    quadrant = Fan([[(1, 0), (0, 1)]], 2)
    split = stellar_subdivision(quadrant, (1, 1))
    assert set(split.maximal_cones) == {((0, 1), (1, 1)), ((1, 0), (1, 1))}
    assert stellar_subdivision(quadrant, (1, 0)) is quadrant
    assert len(stellar_subdivision(completion_fan(SIMPLEX), (1, 1)).maximal_cones) == 4
    assert stellar_subdivision(quadrant, (2, 2)) == split
    with pytest.raises(RayOutsideSupport):
        stellar_subdivision(quadrant, (-1, 0))


def test_resolution_examples():
    smooth = completion_fan(SQUARE)
    assert resolve_to_smooth(smooth).inserted == ()
    one = resolve_to_smooth(Fan([[(1, 0), (1, 2)]], 2))
    assert one.inserted == ((1, 1),) and _unimodular(one.target)
    fan = Fan([[(1, 0), (-1, -2)], [(1, 0), (0, 1)], [(0, 1), (-1, -2)]], 2)
    assert fan.is_complete()
    sub = resolve_to_smooth(fan)
    assert sub.inserted[0] == (0, -1)
    assert _unimodular(sub.target) and sub.target.is_complete()


def test_insertion_cap():
    with pytest.raises(CapExceeded):
        resolve_to_smooth(Fan([[(1, 0), (1, 7)]], 2), cap=1)


@pytest.mark.parametrize("p", random_polytopes(24), ids=str)
def test_corpus_fans_resolve(p):
    if p.dim < p.rank:
        return
    sub = resolve_to_smooth(completion_fan(p))
    assert sub.target.is_smooth() and sub.target.is_complete()
    assert sub.replay() == sub.target
    assert set(sub.source.rays) <= set(sub.target.rays)
    lc = log_canonical_boundary(sub.target)
    assert lc.is_trivial and lc.total.is_zero()


def test_pullback_examples():
    p1 = completion_fan(LatticePolytope([(0,), (1,)]))
    d = TorusInvariantDivisor(p1, {(-1,): 1, (1,): 0})
    trivial = Subdivision(p1, p1, ())
    assert pullback_divisor(d, trivial) == d
    zero = TorusInvariantDivisor.zero(completion_fan(SQUARE))
    s = Subdivision(zero.fan, stellar_subdivision(zero.fan, (1, 1)), ((1, 1),))
    assert pullback_divisor(zero, s).is_zero()


def test_pullback_of_ample_square_class():
    f = LaurentPolynomial({(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1})
    fan = completion_fan(SQUARE)
    d = divisor_closure(f, fan)
    s = Subdivision(fan, stellar_subdivision(fan, (1, 1)), ((1, 1),))
    up = pullback_divisor(d, s)
    assert up.coefficient((1, 1)) == -d.support_function((1, 1)) == 0
    assert up.is_cartier() and not is_ample(up)


@pytest.mark.parametrize("f", random_polynomials(24), ids=str)
def test_pullback_is_functorial_under_split_subdivisions(f):
    p = newton_polytope(f)
    if p.dim < p.rank:
        return
    fan = completion_fan(p)
    sub = resolve_to_smooth(fan)
    d = divisor_closure(f, fan)
    k = len(sub.inserted) // 2
    mid = fan
    for r in sub.inserted[:k]:
        mid = stellar_subdivision(mid, r)
    first = Subdivision(fan, mid, sub.inserted[:k])
    second = Subdivision(mid, sub.target, sub.inserted[k:])
    assert first.then(second).target == sub.target
    assert pullback_divisor(pullback_divisor(d, first), second) == pullback_divisor(d, sub)


def test_log_canonical_examples():
    p1 = completion_fan(LatticePolytope([(0,), (1,)]))
    lc = log_canonical_boundary(p1)
    assert lc.canonical.coeffs == {(-1,): -1, (1,): -1}
    assert lc.boundary.coeffs == {(-1,): 1, (1,): 1}
    assert lc.is_trivial
    assert log_canonical_boundary(completion_fan(SQUARE)).is_trivial
    with pytest.raises(IncompleteFan):
        log_canonical_boundary(Fan([[(1, 0), (0, 1)]], 2))
    with pytest.raises(NotSmooth):
        log_canonical_boundary(completion_fan(LatticePolytope([(0, 0), (3, 1), (1, 3)])))


def test_canonical_class_is_not_principal_alone():
    k = log_canonical_boundary(completion_fan(SIMPLEX)).canonical
    assert not k.is_principal()
