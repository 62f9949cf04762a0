"""Torus-invariant divisors and support functions.

Convention: a Q-Cartier divisor ``D = sum d_i D_i`` has Cartier data
``u_sigma`` with ``<u_sigma, v_i> = -d_i`` for every ray ``v_i`` of
``sigma``.  So ``-K`` has support function value 1 on every ray.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .errors import NonIntegralCharacter, NotQCartier
from .linalg import (
    dot,
    integral_solution_index,
    nullspace,
    rank,
    rat,
    solve,
)

__all__ = [
    "TDivisor",
    "CartierData",
    "is_qcartier",
    "cartier_data",
    "canonical_divisor",
    "boundary_divisor",
    "principal_divisor",
    "qcartier_basis",
    "support_value",
    "relative_picard_rank",
    "picard_number",
    "is_nef_over",
    "is_ample_over",
]


class TDivisor:
    """``sum d_i D_i`` on a fan; ``coeffs`` align with ``fan.rays``."""

    def __init__(self, fan, coeffs):
        coeffs = tuple(rat(c) for c in coeffs)
        if len(coeffs) != len(fan.rays):
            raise ValueError(f"expected {len(fan.rays)} coefficients, got {len(coeffs)}")
        self.fan = fan
        self.coeffs = coeffs

    def __repr__(self):
        return f"TDivisor({[str(c) for c in self.coeffs]})"

    def __add__(self, other):
        return TDivisor(self.fan, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        return TDivisor(self.fan, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return TDivisor(self.fan, [-a for a in self.coeffs])

    def __mul__(self, k):
        k = rat(k)
        return TDivisor(self.fan, [k * a for a in self.coeffs])

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, TDivisor) and self.coeffs == other.coeffs and len(self.fan.rays) == len(other.fan.rays)

    def __hash__(self):
        return hash(self.coeffs)

    @property
    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    @property
    def is_effective(self):
        return all(c >= 0 for c in self.coeffs)

    def support(self):
        return [i for i, c in enumerate(self.coeffs) if c != 0]


@dataclass
class CartierData:
    """Per-maximal-cone covectors (rebased dual coordinates) and the Cartier index."""

    covectors: dict = field(default_factory=dict)
    cartier_index: int = 1

    def u(self, k):
        return self.covectors[k]


def cartier_data(D):
    """Cartier data of ``D`` or ``None`` when ``D`` is not Q-Cartier."""
    fan = D.fan
    n = fan.n
    cov = {}
    index = 1
    for k, mc in enumerate(fan.max_cones):
        if not mc:
            cov[k] = tuple([Fraction(0)] * n)
            continue
        A = [list(fan.rays[i]) for i in mc]
        b = [-D.coeffs[i] for i in mc]
        u = solve(A, b, n)
        if u is None:
            return None
        cov[k] = tuple(u)
        index = lcm(index, integral_solution_index(A, b, n))
    return CartierData(cov, index)


def is_qcartier(D):
    return cartier_data(D)


def require_cartier(D):
    cd = cartier_data(D)
    if cd is None:
        raise NotQCartier("divisor is not Q-Cartier")
    return cd


def canonical_divisor(fan):
    return TDivisor(fan, [-1] * len(fan.rays))


def boundary_divisor(fan):
    return TDivisor(fan, [1] * len(fan.rays))


def principal_divisor(fan, m):
    """``div(chi^m)``: coefficients ``<m, v_i>``; ``m`` in rebased dual coordinates."""
    m = [rat(x) for x in m]
    if any(x.denominator != 1 for x in m):
        raise NonIntegralCharacter(f"character {[str(x) for x in m]} is not integral on the lattice")
    return TDivisor(fan, [dot(m, v) for v in fan.rays])


def principal_basis(fan):
    """Coefficient vectors of ``div(chi^{e_k})`` for the dual basis."""
    return [[r[k] for r in fan.rays] for k in range(fan.n)]


def qcartier_basis(fan):
    """Basis (coefficient vectors) of the space of Q-Cartier invariant divisors."""
    m = len(fan.rays)
    rows = []
    for mc in fan.max_cones:
        if len(mc) <= 1:
            continue
        # linear relations among the rays of the cone
        M = [[fan.rays[i][j] for i in mc] for j in range(fan.n)]
        for rel in nullspace(M, len(mc)):
            row = [Fraction(0)] * m
            for i, c in zip(mc, rel):
                row[i] = c
            rows.append(row)
    if not rows:
        return [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    return nullspace(rows, m)


def support_value(D, cd, v):
    """``h_D(v)`` for ``v`` (rebased) in the support of the fan."""
    fan = D.fan
    for k, mc in enumerate(fan.max_cones):
        if mc and fan.cone(mc).contains(v):
            return dot(cd.covectors[k], v)
        if not mc and all(x == 0 for x in v):
            return Fraction(0)
    from .errors import OutsideSupport

    raise OutsideSupport(f"{v} is not in the support")


def relative_picard_rank(phi):
    """``rho(X/Y)``: Q-Cartier classes modulo principal divisors and pullbacks."""
    from .morphism import require_proper

    require_proper(phi)
    return len(relative_class_basis(phi))


def relative_class_basis(phi):
    """Q-Cartier divisors whose classes form a basis of ``N^1(X/Y)``.

    Returns a list of coefficient vectors; the span of principal divisors
    and pullbacks from the target is complemented greedily by the
    Q-Cartier basis vectors.
    """
    from .morphism import pullback_coeffs

    X = phi.source
    triv = principal_basis(X)
    Y = phi.target
    for b in qcartier_basis(Y):
        triv.append(pullback_coeffs(phi, b))
    span = [row for row in triv if any(x != 0 for x in row)]
    r = rank(span) if span else 0
    out = []
    for b in qcartier_basis(X):
        cand = span + [b]
        rr = rank(cand)
        if rr > r:
            span, r = cand, rr
            out.append(list(b))
    return out


def picard_number(fan):
    """``rho(X)`` over a point."""
    q = qcartier_basis(fan)
    p = [row for row in principal_basis(fan) if any(x != 0 for x in row)]
    return len(q) - (rank(p) if p else 0)


def is_nef_over(D, phi):
    from .intersection import contracted_walls, intersect_wall
    from .morphism import require_proper

    require_proper(phi)
    cd = require_cartier(D)
    return all(intersect_wall(D, w, cd) >= 0 for w in contracted_walls(phi))


def is_ample_over(D, phi):
    from .intersection import contracted_walls, intersect_wall
    from .morphism import require_proper

    require_proper(phi)
    cd = require_cartier(D)
    if any(intersect_wall(D, w, cd) <= 0 for w in contracted_walls(phi)):
        return False
    # strict convexity: distinct maximal cones over one target cone have distinct covectors
    X = phi.source
    seen = {}
    for k, mc in enumerate(X.max_cones):
        key = (phi.cone_map(mc), cd.covectors[k])
        if key in seen and X.dim_of(mc) == X.n:
            return False
        seen[key] = k
    return True
