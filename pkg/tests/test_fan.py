import random

import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from helpers import hirzebruch, in_cone_lp, overlapping_input, p1xp1, p2, p3
from toricmmp import corpus
from toricmmp.errors import NotAFan
from toricmmp.fan import Fan, fan_iso, same_fan, validate_fan

upper = st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(1, 3))


@pytest.mark.parametrize("seed", range(25))
def test_overlapping_cones_rejected(seed):
    rays, cones = overlapping_input(random.Random(seed))
    with pytest.raises(NotAFan):
        validate_fan(rays, cones)


def test_overlapping_cones_report_the_pair():
    rays = [(1, 0), (0, 1), (1, 1)]
    with pytest.raises(NotAFan) as e:
        validate_fan(rays, [(0, 1), (1, 2)])
    assert sorted(map(sorted, e.value.cones)) == [[0, 1], [1, 2]]


@pytest.mark.parametrize("build", [p2, p1xp1, p3, lambda: hirzebruch(2)])
def test_complete_smooth_examples(build):
    f = build()
    assert f.is_complete and f.is_simplicial and f.is_smooth


@pytest.mark.parametrize(
    "build,complete,simplicial",
    [
        (corpus.delta_a, False, False),
        (corpus.delta_b, False, False),
        (corpus.delta_c, False, False),
        (corpus.sato_source, False, False),
        (corpus.fano_source, True, True),
        (corpus.morifiber_source, False, True),
    ],
)
def test_corpus_global_properties(build, complete, simplicial):
    f = build()
    assert f.is_complete == complete
    assert f.is_simplicial == simplicial


@given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3).filter(any), min_size=1, max_size=8))
def test_support_membership_matches_lp(pts):
    f = corpus.delta_a()
    for p in pts:
        expected = any(in_cone_lp([f.rays[i] for i in mc], p) for mc in f.max_cones)
        assert f.in_support(p) == expected
    g = corpus.fano_source()
    assert all(g.in_support(p) for p in pts)


def test_walls():
    assert len(p2().interior_walls) == 3
    a = corpus.delta_a()
    assert [sorted(w.tau) for w in a.interior_walls] == [[4, 5]]
    # each cone has four facets and the two cones share one
    assert len(a.walls) == 7


def test_locate_minimal_cone():
    f = p2()
    assert f.locate((1, 0)) == frozenset({0})
    assert f.locate((1, 1)) == frozenset({0, 1})
    assert f.locate((0, 0)) == frozenset()
    a = corpus.delta_a()
    assert a.locate((-5, 0, 0)) is None


def test_same_fan_ignores_ray_order():
    f = p2()
    g = validate_fan([(-1, -1), (1, 0), (0, 1)], [(1, 2), (0, 2), (0, 1)])
    assert same_fan(f, g)
    assert not same_fan(f, p1xp1())


unimodular = st.sampled_from(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[1, 1], [0, 1]],
        [[2, 1], [1, 1]],
        [[1, -3], [0, 1]],
        [[-1, 0], [2, 1]],
    ]
)


@given(unimodular)
def test_fan_iso_recovers_a_unimodular_image(A):
    f = corpus.weighted_p112()
    rays = [tuple(sum(a * x for a, x in zip(row, r)) for row in A) for r in f.rays]
    g = validate_fan(rays, f.max_cones)
    M = fan_iso(f, g)
    assert M is not None
    assert abs(sympy.Matrix(M).det()) == 1
    images = {tuple(sum(a * x for a, x in zip(row, r)) for row in M) for r in f.rays}
    assert images == set(g.rays)


def test_fan_iso_negative():
    assert fan_iso(corpus.weighted_p112(), corpus.p2_fan()) is None
    assert fan_iso(hirzebruch(1), hirzebruch(2)) is None
    assert fan_iso(hirzebruch(1), hirzebruch(1)) is not None


def test_ambient_rays_of_quotient_fan():
    X = corpus.morifiber_target()
    assert X.lattice.index == 4
    assert [tuple(r) for r in X.ambient_rays()] == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    assert not X.is_smooth


def test_fan_with_lower_dimensional_cones():
    f = validate_fan([(1, 0, 0), (0, 1, 0), (-1, -1, 0)], [(0, 1), (2,)])
    assert not f.is_pure and not f.is_complete
    assert isinstance(f, Fan)
