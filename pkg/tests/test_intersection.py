from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import hirzebruch, p1xp1, p2, p3, polygon_oracle, simplicial_wall_numbers
from toricmmp import corpus
from toricmmp.completion import star_subdivide
from toricmmp.divisor import TDivisor, canonical_divisor, is_ample_over, principal_divisor
from toricmmp.errors import BoundaryWall, NoContractedCurves, NotQCartier
from toricmmp.fan import fan_iso
from toricmmp.intersection import (
    contract_ray,
    contracted_walls,
    find_relatively_ample,
    intersect_wall,
    mori_extremal_rays,
)
from toricmmp.morphism import classify_birational, identity_morphism, to_point

SIMPLICIAL = {
    "P2": p2,
    "P1xP1": p1xp1,
    "F1": lambda: hirzebruch(1),
    "F3": lambda: hirzebruch(3),
    "P3": p3,
    "P(1,1,2)": corpus.weighted_p112,
    "fano": corpus.fano_source,
    "quotient": corpus.morifiber_source,
}


def _unit(fan, j):
    return TDivisor(fan, [int(i == j) for i in range(len(fan.rays))])


@pytest.mark.parametrize("name", sorted(SIMPLICIAL))
def test_wall_intersections_match_the_wall_relation(name):
    f = SIMPLICIAL[name]()
    for w in f.interior_walls:
        expected = simplicial_wall_numbers(f, w)
        got = [intersect_wall(_unit(f, j), w) for j in range(len(f.rays))]
        assert got == expected


@pytest.mark.parametrize("a", range(5))
def test_hirzebruch_self_intersections(a):
    # curves D2 (ray (0,1)) and D4 (ray (0,-1)) are the sections, D1 and D3 the fibers
    f = hirzebruch(a)
    by_ray = {f.rays[next(iter(w.tau))]: w for w in f.interior_walls}
    selfint = {r: intersect_wall(_unit(f, f.rays.index(r)), w) for r, w in by_ray.items()}
    assert selfint == {(1, 0): 0, (0, 1): -a, (-1, a): 0, (0, -1): a}


@given(st.integers(0, 3), st.tuples(st.integers(-5, 5), st.integers(-5, 5)), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_intersections_are_invariant_under_linear_equivalence(a, m, coeffs):
    f = hirzebruch(a)
    D = TDivisor(f, coeffs)
    E = D + principal_divisor(f, m)
    for w in f.interior_walls:
        assert intersect_wall(D, w) == intersect_wall(E, w)


def test_principal_divisor_is_numerically_trivial():
    f = corpus.fano_source()
    P = principal_divisor(f, (2, -1, 3))
    assert all(intersect_wall(P, w) == 0 for w in f.interior_walls)


def test_minus_k_of_p3_meets_every_line_in_four():
    f = p3()
    K = canonical_divisor(f)
    assert {-intersect_wall(K, w) for w in f.interior_walls} == {4}


def test_boundary_wall_has_no_intersection_number():
    f = corpus.delta_a()
    w = next(w for w in f.walls if not w.interior)
    with pytest.raises(BoundaryWall):
        intersect_wall(TDivisor(f, [0] * 6), w)


def test_intersection_needs_qcartier():
    f = corpus.delta_f()
    K = canonical_divisor(f)
    with pytest.raises(NotQCartier):
        intersect_wall(K, f.walls[0])


def test_contracted_walls_of_identity_and_point():
    f = hirzebruch(2)
    assert contracted_walls(identity_morphism(f)) == []
    assert len(contracted_walls(to_point(f))) == 4
    with pytest.raises(NoContractedCurves):
        mori_extremal_rays(identity_morphism(f))


def test_f1_has_a_divisorial_and_a_fiber_contraction():
    f = hirzebruch(1)
    rays = mori_extremal_rays(to_point(f))
    assert len(rays) == 2
    targets = []
    for R in rays:
        phi_R, psi = contract_ray(to_point(f), R)
        W = phi_R.target
        if W.n == 2:
            assert fan_iso(W, p2()) is not None
            assert classify_birational(phi_R).is_divisorial
            targets.append("P2")
        else:
            assert W.n == 1 and fan_iso(W, corpus.p1_fan()) is not None
            targets.append("P1")
        assert psi.target.n == 0
    assert sorted(targets) == ["P1", "P2"]


def test_p1xp1_has_two_fiber_contractions():
    rays = mori_extremal_rays(to_point(p1xp1()))
    assert len(rays) == 2
    for R in rays:
        phi_R, _ = contract_ray(to_point(p1xp1()), R)
        assert phi_R.target.n == 1


def test_flip_contraction_is_small():
    f = corpus.flip_morphism()
    (R,) = mori_extremal_rays(f)
    phi_R, psi = contract_ray(f, R)
    assert classify_birational(phi_R).is_small
    assert fan_iso(phi_R.target, corpus.delta_c()) is not None


def test_sato_has_one_extremal_ray_with_negative_canonical_degree():
    f = corpus.sato_morphism()
    K = canonical_divisor(f.source)
    rays = mori_extremal_rays(f)
    assert len(rays) == 1
    assert all(intersect_wall(K, w) < 0 for w in rays[0].walls)


@pytest.mark.parametrize("build", [p2, p1xp1, lambda: hirzebruch(1), lambda: hirzebruch(2), corpus.weighted_p112])
def test_relatively_ample_divisor_on_surfaces(build):
    f = build()
    A = find_relatively_ample(to_point(f))
    assert A is not None
    if f.is_smooth:
        _, ample = polygon_oracle(f, A.coeffs)
        assert ample
    assert is_ample_over(A, to_point(f))


def test_relatively_ample_over_a_base():
    f = corpus.fano_morphism()
    A = find_relatively_ample(f)
    assert A is not None and is_ample_over(A, f)
    f = corpus.sato_morphism()
    A = find_relatively_ample(f)
    assert A is not None and is_ample_over(A, f)


def test_star_subdivision_creates_an_exceptional_ray():
    # the blow-up of P2 at a fixed point is F1
    f = star_subdivide(p2(), (1, 1))
    assert fan_iso(f, hirzebruch(1)) is not None
    assert len(mori_extremal_rays(to_point(f))) == 2
    E = f.rays.index((1, 1))
    w = next(w for w in f.interior_walls if w.tau == frozenset([E]))
    assert intersect_wall(_unit(f, E), w) == Fraction(-1)
