import random
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from helpers import box_points, orthant, reid_tai
from toricmmp import corpus
from toricmmp.cone import Cone
from toricmmp.errors import InvalidWeights, NotQGorenstein, OutsideSupport, RayOfFan, WrongDimension
from toricmmp.fan import validate_fan
from toricmmp.linalg import primitive_int
from toricmmp.singularity import (
    QuotientSpec,
    classify,
    discrepancy,
    is_odp,
    is_qgorenstein,
    quotient_fan,
    shed_points,
)

orders = st.integers(2, 11)


def _quotient(r, w):
    return quotient_fan(QuotientSpec(r, w, orthant(3)))


@st.composite
def isolated_weights(draw):
    r = draw(orders)
    units = [a for a in range(1, r) if gcd(a, r) == 1]
    w = tuple(draw(st.sampled_from(units)) for _ in range(3))
    return r, w


@given(isolated_weights())
def test_classification_agrees_with_age_criterion(rw):
    r, w = rw
    ages = reid_tai(r, w)
    rep = classify(_quotient(r, w))
    if min(ages) > 1:
        assert rep.label == "terminal"
    elif min(ages) == 1:
        assert rep.label == "canonical"
    else:
        assert rep.label == "not-canonical"


@given(isolated_weights())
def test_terminal_quotients_have_a_pair_of_opposite_weights(rw):
    # terminal 3-fold cyclic quotients are 1/r(1, -1, a) up to reordering and a choice of generator
    r, w = rw
    opposite = any((w[i] + w[j]) % r == 0 for i in range(3) for j in range(i + 1, 3))
    assert classify(_quotient(r, w)).is_terminal == opposite


@given(isolated_weights())
def test_gorenstein_index_divides_the_order(rw):
    r, w = rw
    rep = classify(_quotient(r, w))
    assert rep.qgorenstein
    assert r % rep.gorenstein_index == 0
    assert (rep.gorenstein_index == 1) == (sum(w) % r == 0)


@given(isolated_weights(), st.integers(1, 10))
def test_discrepancy_of_group_elements_is_age_minus_one(rw, k):
    r, w = rw
    assume(k < r)
    f = _quotient(r, w)
    p = tuple(Fraction(k * a % r, r) for a in w)
    v = f.lattice.from_ambient(p)
    assume(primitive_int(v) == tuple(v))
    assert discrepancy(f, v) == reid_tai(r, w)[k - 1] - 1


@pytest.mark.parametrize("r, w", [(5, (1, 2, 3)), (7, (1, 2, 4)), (4, (1, 1, 1)), (6, (1, 5, 1))])
def test_shed_points_match_a_box_scan(r, w):
    f = _quotient(r, w)
    cd = is_qgorenstein(f)
    psi = cd.covectors[0]
    gens = [f.rays[i] for i in f.max_cones[0]]
    scan = [p for p in box_points(gens, psi, 1, 3 * r) if p not in f.rays]
    assert [p for p, _ in shed_points(f)] == scan


def test_classify_smooth_and_non_qgorenstein():
    assert classify(orthant(3)).label == "smooth"
    assert classify(corpus.delta_f()).label == "not-qgorenstein"
    assert classify(corpus.delta_a()).label == "canonical"


def test_discrepancy_errors():
    with pytest.raises(NotQGorenstein):
        discrepancy(corpus.delta_f(), (1, 1, 1))
    with pytest.raises(RayOfFan):
        discrepancy(corpus.delta_a(), (1, 0, 0))
    with pytest.raises(OutsideSupport):
        discrepancy(corpus.delta_a(), (-1, 0, 0))
    with pytest.raises(ValueError):
        discrepancy(corpus.delta_a(), (2, 2, 0))


def test_discrepancy_of_a_smooth_blowup_center():
    # blowing up a codimension-k stratum of a smooth variety has discrepancy k - 1
    f = orthant(3)
    assert discrepancy(f, (1, 1, 0)) == 1
    assert discrepancy(f, (1, 1, 1)) == 2
    assert discrepancy(f, (2, 1, 1)) == 3


def _random_unimodular(rng):
    M = [[int(i == j) for j in range(3)] for i in range(3)]
    for _ in range(6):
        i, j = rng.sample(range(3), 2)
        c = rng.choice([-1, 1])
        M[i] = [a + c * b for a, b in zip(M[i], M[j])]
    return M


def test_odp_is_invariant_under_unimodular_maps():
    rng = random.Random(5)
    square = [(1, 0, 0), (0, 1, 0), (1, 0, 1), (0, 1, 1)]
    rect = [(1, 0, 0), (0, 1, 0), (2, 0, 1), (0, 1, 1)]
    for _ in range(10):
        M = _random_unimodular(rng)

        def image(v):
            return tuple(sum(a * b for a, b in zip(row, v)) for row in M)

        assert is_odp(Cone([image(v) for v in square]))
        assert not is_odp(Cone([image(v) for v in rect]))
    assert not is_odp(Cone([(1, 0, 0), (0, 1, 0), (0, 0, 1)]))
    with pytest.raises(WrongDimension):
        is_odp(Cone([(1, 0), (0, 1)]))


def test_invalid_weights():
    with pytest.raises(InvalidWeights):
        _quotient(4, (2, 2, 2))
    with pytest.raises(InvalidWeights):
        _quotient(3, (1, 1))
    with pytest.raises(InvalidWeights):
        _quotient(0, (1, 1, 1))
    assert _quotient(1, (0, 0, 0)) is not None


def test_quotient_fan_of_a_non_simplicial_base():
    base = validate_fan([(1, 0, 0), (0, 1, 0), (1, 0, 1), (0, 1, 1)], [(0, 1, 2, 3)])
    f = quotient_fan(QuotientSpec(2, (1, 1, 1), base))
    assert f.lattice.contains((Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)))
