"""Builders for the worked examples: explicit fans and morphisms in rank 3 and 4."""

from .fan import Fan, validate_fan
from .lattice import Lattice
from .morphism import check_morphism
from .singularity import QuotientSpec, quotient_fan

__all__ = [
    "FLIP_RAYS",
    "delta_a",
    "delta_b",
    "delta_c",
    "sato_source",
    "sato_target",
    "sato_morphism",
    "delta_d",
    "delta_e",
    "delta_f",
    "fano_source",
    "p1_fan",
    "fano_morphism",
    "morifiber_base",
    "morifiber_target",
    "morifiber_source",
    "morifiber_morphism",
    "weighted_p112",
    "p2_fan",
]

# e1, e2, e3, e4, f1, f2
FLIP_RAYS = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, -1), (3, 1, -2), (-1, 1, 2)]

_I3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def delta_a():
    return validate_fan(FLIP_RAYS, [(0, 2, 4, 5), (1, 3, 4, 5)])


def delta_b():
    return validate_fan(FLIP_RAYS, [(0, 3, 4), (1, 2, 5), (0, 1, 2, 3)])


def delta_c():
    return validate_fan(FLIP_RAYS, [(0, 1, 2, 3, 4, 5)])


def flip_morphism():
    return check_morphism(delta_a(), delta_c(), _I3)


def flipped_morphism():
    return check_morphism(delta_b(), delta_c(), _I3)


# e1, e2, e3, e4, e5, e6
SATO_RAYS = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, -1), (1, 1, 0), (0, 1, 1)]


def sato_source():
    return validate_fan(SATO_RAYS, [(0, 3, 4), (0, 2, 4, 5), (1, 3, 4, 5)])


def sato_target():
    return validate_fan(SATO_RAYS[:4], [(0, 1, 2, 3)])


def sato_morphism():
    return check_morphism(sato_source(), sato_target(), _I3)


# e1, e2, e3, e4, f2, f3
NONQ_RAYS = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, -1), (-1, 1, 2), (0, 1, 1)]


def delta_d():
    return validate_fan(NONQ_RAYS, [(0, 3, 5), (0, 2, 4, 5), (1, 3, 4, 5)])


def delta_e():
    return validate_fan(NONQ_RAYS[:5], [(0, 1, 2, 3), (1, 2, 4)])


def delta_f():
    return validate_fan(NONQ_RAYS[:5], [(0, 1, 2, 3, 4)])


def nonq_divisorial():
    return check_morphism(delta_d(), delta_f(), _I3)


def nonq_small():
    return check_morphism(delta_e(), delta_f(), _I3)


FANO_RAYS = [(0, 0, 1), (-1, 0, 0), (1, 0, -1), (0, -1, 0), (0, 2, -1)]


def fano_source():
    return validate_fan(FANO_RAYS, [(0, 1, 3), (0, 1, 4), (0, 2, 3), (0, 2, 4), (1, 2, 3), (1, 2, 4)])


def p1_fan():
    return validate_fan([(1,), (-1,)], [(0,), (1,)])


def fano_morphism():
    return check_morphism(fano_source(), p1_fan(), [[0, 1, 0]])


def weighted_p112():
    """P(1,1,2): the relation v0 + v1 + 2 v2 = 0."""
    return validate_fan([(1, 0), (-1, -2), (0, 1)], [(0, 1), (0, 2), (1, 2)])


def p2_fan():
    return validate_fan([(1, 0), (0, 1), (-1, -1)], [(0, 1), (0, 2), (1, 2)])


def morifiber_base():
    return validate_fan([(1, 0, 0), (0, 1, 0), (0, 0, 1)], [(0, 1, 2)])


def morifiber_target():
    """C^3 modulo Z/4 acting with weights (1, 1, 1)."""
    return quotient_fan(QuotientSpec(4, (1, 1, 1), morifiber_base()))


def _p1_times_c3():
    rays = [(1, 0, 0, 0), (-1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
    return validate_fan(rays, [(0, 2, 3, 4), (1, 2, 3, 4)])


def morifiber_source():
    """P^1 x C^3 modulo Z/4 acting with weights (2, 1, 1, 1)."""
    return quotient_fan(QuotientSpec(4, (2, 1, 1, 1), _p1_times_c3()))


def morifiber_morphism():
    M = [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    return check_morphism(morifiber_source(), morifiber_target(), M, ambient=True)
