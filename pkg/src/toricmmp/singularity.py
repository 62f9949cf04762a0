"""Q-Gorenstein tests, discrepancies, shed classification and quotient fans."""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import gcd

from .cone import Cone, lattice_points_under
from .divisor import canonical_divisor, cartier_data
from .errors import InvalidWeights, NotQGorenstein, OutsideSupport, RayOfFan, WrongDimension
from .fan import Fan, validate_fan
from .lattice import Lattice
from .linalg import det, dot, inverse, matmul, primitive_int, rat, transpose

__all__ = [
    "SingularityReport",
    "QuotientSpec",
    "is_qgorenstein",
    "discrepancy",
    "classify",
    "is_odp",
    "quotient_fan",
    "shed_points",
]


def is_qgorenstein(fan):
    """Cartier data of ``K`` or ``None``."""
    return cartier_data(canonical_divisor(fan))


def _psi_K(fan, cd, k):
    # K has d_i = -1, so u with <u, v_i> = 1 on rays: psi_K = u
    return cd.covectors[k]


def discrepancy(fan, v):
    """``psi_K(v) - 1`` for a lattice vector ``v`` (rebased) in the support."""
    v = tuple(int(x) for x in v)
    cd = is_qgorenstein(fan)
    if cd is None:
        raise NotQGorenstein("K is not Q-Cartier")
    if primitive_int(v) != v:
        raise ValueError("expected a primitive lattice vector")
    if v in fan.rays:
        raise RayOfFan("the vector is a ray of the fan")
    for k, mc in enumerate(fan.max_cones):
        if mc and fan.cone(mc).contains(v):
            return dot(_psi_K(fan, cd, k), v) - 1
    raise OutsideSupport("the vector is outside the support")


@dataclass
class SingularityReport:
    qgorenstein: bool
    gorenstein_index: int = None
    label: str = "not-qgorenstein"
    witnesses: list = field(default_factory=list)  # (point, psi value), rebased
    singular_cones: list = field(default_factory=list)

    @property
    def is_terminal(self):
        return self.label in ("smooth", "terminal")

    @property
    def is_canonical(self):
        return self.label in ("smooth", "terminal", "canonical")


def shed_points(fan, cd=None):
    """Nonzero lattice points under the roof ``psi_K <= 1`` that are not rays."""
    if cd is None:
        cd = is_qgorenstein(fan)
        if cd is None:
            raise NotQGorenstein("K is not Q-Cartier")
    pts = {}
    rays = set(fan.rays)
    for k, mc in enumerate(fan.max_cones):
        if not mc:
            continue
        psi = _psi_K(fan, cd, k)
        for p in lattice_points_under([fan.rays[i] for i in mc], psi, 1):
            if p not in rays:
                pts[p] = dot(psi, p)
    return sorted(pts.items())


def classify(fan):
    cd = is_qgorenstein(fan)
    if cd is None:
        return SingularityReport(False, None, "not-qgorenstein")
    singular = [list(mc) for mc in fan.max_cones if mc and not fan.cone(mc).is_smooth]
    if not singular:
        return SingularityReport(True, cd.cartier_index, "smooth")
    witnesses = shed_points(fan, cd)
    if not witnesses:
        label = "terminal"
    elif all(val == 1 for _, val in witnesses):
        label = "canonical"
    else:
        label = "not-canonical"
    return SingularityReport(True, cd.cartier_index, label, witnesses, singular)


_ODP = [(1, 0, 0), (0, 1, 0), (1, 0, 1), (0, 1, 1)]


def is_odp(cone):
    """Unimodular equivalence with the cone over the unit square."""
    if cone.n != 3 or cone.dim != 3:
        raise WrongDimension("expected a 3-dimensional cone in a rank-3 lattice")
    rays = cone.rays
    if len(rays) != 4:
        return False
    target = Cone(_ODP)
    tset = set(target.rays)
    base = [list(r) for r in _ODP[:3]]
    for perm in permutations(rays, 3):
        S = transpose([list(p) for p in perm])
        if det(S) == 0:
            continue
        A = matmul(transpose(base), inverse(S))
        if any(x.denominator != 1 for row in A for x in row) or abs(det(A)) != 1:
            continue
        img = {tuple(int(sum(a * b for a, b in zip(row, r))) for row in A) for r in rays}
        if img == tset:
            return True
    return False


@dataclass
class QuotientSpec:
    """The cyclic group of order ``r`` acting with ``weights`` on the toric variety of ``base``."""

    order: int
    weights: tuple
    base: Fan

    def generator(self):
        return tuple(Fraction(a, self.order) for a in self.weights)


def quotient_fan(spec):
    r, w = spec.order, tuple(int(a) for a in spec.weights)
    base = spec.base
    if r < 1 or len(w) != base.n:
        raise InvalidWeights("order must be positive and weights must match the rank")
    g = r
    for a in w:
        g = gcd(g, a)
    if g != 1:
        raise InvalidWeights("weights and order must be coprime (faithful action)")
    if not base.lattice.is_standard:
        raise InvalidWeights("the base fan must live in the standard lattice")
    if r == 1:
        return base
    L = Lattice(base.n, [spec.generator()])
    return Fan.from_ambient(list(base.rays), list(base.max_cones), lattice=L)
