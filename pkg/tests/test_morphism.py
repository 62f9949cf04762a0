from fractions import Fraction
from itertools import combinations

import pytest

from helpers import hirzebruch, p1xp1, p2
from toricmmp import corpus
from toricmmp.completion import star_subdivide
from toricmmp.divisor import TDivisor
from toricmmp.errors import IncompatibleCone, NonIntegralMap, NotBirational, ReducibleFiber
from toricmmp.fan import fan_iso, validate_fan
from toricmmp.morphism import (
    check_morphism,
    classify_birational,
    compose,
    fiber_fan,
    identity_morphism,
    is_proper,
    pullback_divisor,
    to_point,
)

I2 = [[1, 0], [0, 1]]


def test_incompatible_cone():
    with pytest.raises(IncompatibleCone):
        check_morphism(p2(), corpus.p1_fan(), [[1, 0]])


def test_non_integral_map():
    Y = corpus.morifiber_target()
    with pytest.raises(NonIntegralMap):
        check_morphism(Y, corpus.morifiber_base(), [[1, 0, 0], [0, 1, 0], [0, 0, 1]], ambient=True)
    # the other direction is the quotient map and is integral
    phi = check_morphism(corpus.morifiber_base(), Y, [[1, 0, 0], [0, 1, 0], [0, 0, 1]], ambient=True)
    assert not phi.is_unimodular


@pytest.mark.parametrize("k", [1, 2])
def test_subfans_of_p2_are_not_proper_over_p2(k):
    f = p2()
    for keep in combinations(f.max_cones, k):
        used = sorted(set().union(*keep))
        sub = validate_fan([f.rays[i] for i in used], [[used.index(i) for i in c] for c in keep])
        assert not is_proper(check_morphism(sub, f, I2))
    assert is_proper(identity_morphism(f))


def test_projection_of_hirzebruch_is_proper():
    for a in range(4):
        phi = check_morphism(hirzebruch(a), corpus.p1_fan(), [[1, 0]])
        assert is_proper(phi)
        fib, mult = fiber_fan(phi, [])
        assert len(fib.rays) == 2 and mult == 1


def test_corpus_properness():
    assert is_proper(corpus.flip_morphism())
    assert is_proper(corpus.sato_morphism())
    assert is_proper(corpus.fano_morphism())
    assert is_proper(corpus.morifiber_morphism())
    assert not is_proper(to_point(corpus.delta_a()))
    assert is_proper(to_point(corpus.fano_source()))


def blowup_p2():
    return star_subdivide(p2(), (1, 1))


def test_blowup_is_divisorial():
    phi = check_morphism(blowup_p2(), p2(), I2)
    exc = classify_birational(phi)
    assert exc.is_divisorial and not exc.is_small
    assert [phi.source.rays[i] for i in exc.exceptional_ray_indices] == [(1, 1)]
    assert classify_birational(corpus.flip_morphism()).is_small
    with pytest.raises(NotBirational):
        classify_birational(corpus.fano_morphism())


def test_pullback_of_a_line_to_the_blowup():
    phi = check_morphism(blowup_p2(), p2(), I2)
    X = phi.source
    D1 = TDivisor(p2(), [1, 0, 0])
    pb = pullback_divisor(phi, D1)
    # pullback of the line through the blown-up point: strict transform plus E
    expected = {X.rays.index((1, 0)): 1, X.rays.index((1, 1)): 1}
    assert list(pb.coeffs) == [expected.get(i, 0) for i in range(len(X.rays))]
    D3 = TDivisor(p2(), [0, 0, 1])
    pb3 = pullback_divisor(phi, D3)
    assert pb3.coeffs[X.rays.index((1, 1))] == 0


def test_fiber_fans_of_the_fano_example():
    phi = corpus.fano_morphism()
    Y = phi.target
    plus, mult = fiber_fan(phi, [Y.rays.index((1,))])
    assert mult == 2 and fan_iso(plus, corpus.weighted_p112()) is not None
    minus, mult = fiber_fan(phi, [Y.rays.index((-1,))])
    assert mult == 1 and fan_iso(minus, corpus.p2_fan()) is not None
    generic, mult = fiber_fan(phi, [])
    assert mult == 1 and fan_iso(generic, corpus.p2_fan()) is not None


def test_reducible_fiber():
    # P^1 x P^1 blown up at a torus-fixed point: the fiber over that point splits
    X = star_subdivide(p1xp1(), (1, 1))
    phi = check_morphism(X, corpus.p1_fan(), [[1, 0]])
    with pytest.raises(ReducibleFiber):
        fiber_fan(phi, [phi.target.rays.index((1,))])


def test_morifiber_central_fiber():
    phi = corpus.morifiber_morphism()
    fib, mult = fiber_fan(phi, list(range(3)))
    assert len(fib.rays) == 2 and fib.n == 1
    generic, m0 = fiber_fan(phi, [])
    assert m0 == 1 and generic.is_complete


def test_compose():
    phi = check_morphism(blowup_p2(), p2(), I2)
    psi = to_point(p2())
    c = compose(phi, psi)
    assert c.target.n == 0 and is_proper(c)
    k = compose(phi, identity_morphism(p2()))
    assert k.matrix == I2


def test_kernel_of_the_fano_projection():
    phi = corpus.fano_morphism()
    K = phi.kernel()
    assert len(K) == 2
    assert all(phi.image(v) == (0,) for v in K)
    assert Fraction(1) == 1
