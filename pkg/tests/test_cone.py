from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from helpers import box_points, in_cone_lp
from toricmmp import corpus
from toricmmp.cone import Cone, QPolyhedron, cone_from_inequalities, lattice_points_under, pulling_triangulation
from toricmmp.divisor import canonical_divisor, cartier_data
from toricmmp.errors import NotStronglyConvex, UnboundedRegion
from toricmmp.lattice import Lattice

vec3 = st.lists(st.integers(-3, 3), min_size=3, max_size=3).filter(any)
# generators in the open upper half space z > 0 give strongly convex cones
upper = st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(1, 3))


@given(st.lists(upper, min_size=1, max_size=6), st.lists(vec3, min_size=5, max_size=5))
def test_membership_matches_lp(gens, pts):
    c = Cone(gens)
    for p in pts:
        assert c.contains(p) == in_cone_lp(gens, p)


@given(st.lists(upper, min_size=1, max_size=6))
def test_extreme_rays_match_lp_oracle(gens):
    c = Cone(gens)
    prim = c.gens
    for g in prim:
        others = [h for h in prim if h != g]
        extreme = not others or not in_cone_lp(others, g)
        assert (g in c.rays) == extreme


@given(st.lists(upper, min_size=1, max_size=6))
def test_v_h_v_roundtrip(gens):
    c = Cone(gens)
    back = cone_from_inequalities(c.facets, 3, c.equations)
    assert set(back.rays) == set(c.rays)


@given(st.lists(upper, min_size=1, max_size=6))
def test_facets_are_supporting_and_tight(gens):
    c = Cone(gens)
    for f in c.facets:
        assert all(sum(a * b for a, b in zip(f, g)) >= 0 for g in c.rays)
        tight = [g for g in c.rays if sum(a * b for a, b in zip(f, g)) == 0]
        assert sympy.Matrix(tight).rank() == c.dim - 1 if tight else c.dim == 1


def test_square_cone_faces():
    c = Cone([(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)])
    assert len(c.faces()) == 10
    assert not c.is_simplicial


def test_line_rejected():
    with pytest.raises(NotStronglyConvex):
        Cone([(1, 0), (-1, 0)])
    assert not Cone([(1, 0), (-1, 0)], allow_lines=True).is_strongly_convex


@given(st.lists(upper, min_size=3, max_size=3))
def test_multiplicity_is_abs_det(gens):
    assume(sympy.Matrix(gens).det() != 0)
    c = Cone(gens)
    assume(len(c.rays) == 3)
    assert c.multiplicity == abs(sympy.Matrix(c.rays).det())


def det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def brute_vertices(ineqs):
    """Cramer's rule on every triple of tight constraints, keeping feasible points."""
    out = set()
    for sub in combinations(ineqs, 3):
        A = [list(a) for a, _ in sub]
        d = det3(A)
        if d == 0:
            continue
        x = []
        for k in range(3):
            Ak = [row[:k] + [b] + row[k + 1 :] for row, (_, b) in zip(A, sub)]
            x.append(Fraction(det3(Ak), d))
        if all(sum(a * y for a, y in zip(row, x)) >= b for row, b in ineqs):
            out.add(tuple(x))
    return out


@given(st.lists(st.tuples(st.tuples(*[st.integers(-3, 3)] * 3), st.integers(-4, 1)), min_size=4, max_size=8))
def test_polyhedron_vertices_match_brute_force(ineqs):
    box = [((1, 0, 0), -5), ((-1, 0, 0), -5), ((0, 1, 0), -5), ((0, -1, 0), -5), ((0, 0, 1), -5), ((0, 0, -1), -5)]
    ineqs = [(a, b) for a, b in ineqs if any(a)] + box
    P = QPolyhedron(3, ineqs)
    assert set(map(tuple, P.vertices)) == brute_vertices(ineqs)


def test_polyhedron_empty_and_unbounded():
    assert QPolyhedron(1, [((1,), 1), ((-1,), 0)]).is_empty
    P = QPolyhedron(2, [((1, 0), 0), ((0, 1), 0)])
    assert set(map(tuple, P.vertices)) == {(0, 0)}
    assert sorted(P.rays) == [(0, 1), (1, 0)]


def section_area(gens):
    """Area of the cross-section {z = 1} of a cone in the upper half space."""
    pts = np.array([[g[0] / g[2], g[1] / g[2]] for g in gens])
    return ConvexHull(pts).volume


@given(st.lists(upper, min_size=3, max_size=7))
def test_pulling_triangulation_tiles_the_cone(gens):
    c = Cone(gens)
    assume(c.dim == 3)
    simplices = pulling_triangulation(c.rays, 3)
    assert all(len(s) == 3 for s in simplices)
    total = sum(section_area(s) for s in simplices)
    assert abs(total - section_area(c.rays)) < 1e-9
    # interiors are disjoint: the areas add up and every simplex lies in the cone
    assert all(c.contains(r) for s in simplices for r in s)


CORPUS_FANS = [corpus.delta_a, corpus.delta_b, corpus.sato_source, corpus.delta_d, corpus.delta_e, corpus.fano_source]


@pytest.mark.parametrize("build", CORPUS_FANS)
@pytest.mark.parametrize("bound", [1, 2])
def test_lattice_points_under_matches_box_scan(build, bound):
    fan = build()
    cd = cartier_data(canonical_divisor(fan))
    for k, mc in enumerate(fan.max_cones):
        gens = [fan.rays[i] for i in mc]
        psi = cd.covectors[k]
        radius = bound * max(abs(x) for g in gens for x in g)
        assert lattice_points_under(gens, psi, bound) == box_points(gens, psi, bound, radius)


def test_lattice_points_in_quotient_lattice():
    L = Lattice(3, [(Fraction(1, 4),) * 3])
    gens = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    pts = lattice_points_under(gens, (1, 1, 1), 1, lattice=L)
    # psi(1/4,1/4,1/4) = 3/4; the next coset point (1/2,1/2,1/2) has psi = 3/2
    quarter = tuple(Fraction(1, 4) for _ in range(3))
    assert {tuple(p) for p in pts} == {(1, 0, 0), (0, 1, 0), (0, 0, 1), quarter}


def test_lattice_points_unbounded():
    with pytest.raises(UnboundedRegion):
        lattice_points_under([(1, 0), (0, 1)], (1, 0), 1)
