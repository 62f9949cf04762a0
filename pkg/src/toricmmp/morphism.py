"""Toric morphisms: compatibility, properness, birational type, pullback, fibers."""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .cone import Cone, double_description
from .errors import (
    IncompatibleCone,
    NonIntegralMap,
    NotBirational,
    NotProper,
    NotQCartier,
    ReducibleFiber,
)
from .fan import Fan, point_fan, validate_fan
from .lattice import Lattice
from .linalg import (
    det,
    dot,
    identity,
    inverse,
    is_zero,
    matmul,
    nullspace,
    primitive_int,
    rank,
    rat,
    saturation,
    snf,
    solve,
    transpose,
    unimodular_completion,
)

__all__ = [
    "ToricMorphism",
    "ExceptionalData",
    "check_morphism",
    "identity_morphism",
    "to_point",
    "is_proper",
    "require_proper",
    "classify_birational",
    "pullback_divisor",
    "pullback_coeffs",
    "fiber_fan",
    "compose",
]


def _apply(A, v):
    return tuple(sum(a * b for a, b in zip(row, v)) for row in A)


class ToricMorphism:
    """A lattice map ``A`` (rebased coordinates, ``n' x n``) compatible with two fans."""

    def __init__(self, source, target, matrix):
        self.source = source
        self.target = target
        self.matrix = [[int(x) for x in row] for row in matrix]
        self._cone_map = {}

    def __repr__(self):
        return f"ToricMorphism(matrix={self.matrix})"

    def image(self, v):
        if self.target.n == 0:
            return ()
        return _apply(self.matrix, v)

    def cone_map(self, idx):
        """Minimal target cone containing the image of the source cone ``idx``."""
        key = frozenset(idx)
        if key not in self._cone_map:
            X, Y = self.source, self.target
            if key:
                p = tuple(sum(col) for col in zip(*[self.image(X.rays[i]) for i in key]))
            else:
                p = tuple([0] * Y.n)
            loc = Y.locate(p)
            if loc is None:
                raise IncompatibleCone(f"image of cone {sorted(key)} is not in the target support", sorted(key))
            tc = Y.cone(loc) if loc else None
            for i in key:
                w = self.image(X.rays[i])
                if tc is None:
                    ok = is_zero(w)
                else:
                    ok = tc.contains(w)
                if not ok:
                    raise IncompatibleCone(f"cone {sorted(key)} does not map into a cone of the target", sorted(key))
            self._cone_map[key] = loc
        return self._cone_map[key]

    @cached_property
    def is_unimodular(self):
        return self.source.n == self.target.n and abs(det(self.matrix)) == 1 if self.source.n else True

    @cached_property
    def is_birational(self):
        return self.source.n == self.target.n and self.is_unimodular

    def kernel(self):
        if self.target.n == 0:
            return [tuple(int(i == j) for j in range(self.source.n)) for i in range(self.source.n)]
        from .linalg import kernel_lattice

        return kernel_lattice(self.matrix, self.source.n)


def check_morphism(source, target, matrix, ambient=False):
    """Validate a morphism.  ``ambient`` means ``matrix`` acts on ambient coordinates."""
    n, m = source.n, target.n
    if m == 0:
        A = []
    else:
        A = [[rat(x) for x in row] for row in matrix]
        if len(A) != m or any(len(row) != n for row in A):
            raise NonIntegralMap(f"matrix must be {m} x {n}")
        if ambient:
            Bs = [[x for x in row] for row in source.lattice._B]
            Bt_inv = target.lattice._Binv
            A = matmul(matmul(Bt_inv, A), Bs)
        if any(x.denominator != 1 for row in A for x in row):
            raise NonIntegralMap("matrix does not map the source lattice into the target lattice")
        A = [[int(x) for x in row] for row in A]
    phi = ToricMorphism(source, target, A)
    for mc in source.max_cones:
        phi.cone_map(mc)
    return phi


def identity_morphism(fan):
    return ToricMorphism(fan, fan, identity(fan.n))


def to_point(fan):
    """The structure morphism to a point."""
    return ToricMorphism(fan, point_fan(), [])


def compose(phi, psi):
    """``psi o phi`` for ``phi: X -> Y`` and ``psi: Y -> Z``."""
    if psi.target.n == 0:
        return ToricMorphism(phi.source, psi.target, [])
    A = matmul(psi.matrix, phi.matrix) if phi.matrix else [[0] * phi.source.n for _ in range(psi.target.n)]
    return check_morphism(phi.source, psi.target, A)


# ---------------------------------------------------------------------------
# properness


def _preimage_cone_hrep(phi, tcone_idx):
    """Inequalities and equations of ``A^{-1}(tau)``."""
    Y = phi.target
    n = phi.source.n
    if Y.n == 0:
        return [], []
    if not tcone_idx:
        return [], [list(row) for row in phi.matrix]
    tau = Y.cone(tcone_idx)
    A = phi.matrix
    ineqs = [[sum(f[k] * A[k][j] for k in range(Y.n)) for j in range(n)] for f in tau.facets]
    eqs = [[sum(e[k] * A[k][j] for k in range(Y.n)) for j in range(n)] for e in tau.equations]
    return ineqs, eqs


def _covers(phi, tcone_idx):
    """Whether the source cones mapping into ``tau`` cover ``A^{-1}(tau)``."""
    X = phi.source
    n = X.n
    ineqs, eqs = _preimage_cone_hrep(phi, tcone_idx)
    rays, lin = double_description([r for r in ineqs if not is_zero(r)], n, [e for e in eqs if not is_zero(e)])
    gens = list(rays) + list(lin)
    d = rank(gens) if gens else 0
    tset = frozenset(tcone_idx)
    inside = [c for c in X.cones if phi.cone_map(c) <= tset]
    if d == 0:
        return frozenset() in set(inside)
    top = [c for c in inside if X.dim_of(c) == d]
    if not top:
        return False
    real_ineqs = []
    for r in ineqs:
        if any(dot(r, g) != 0 for g in gens):
            real_ineqs.append(r)
    faces = {}
    for c in top:
        cobj = X.cone(c)
        pos = {X.rays[i]: i for i in c}
        for s in cobj.face_ray_sets:
            f = frozenset(pos[cobj.rays[j]] for j in s)
            if X.dim_of(f) == d - 1:
                faces.setdefault(f, []).append(c)
    for f, sides in faces.items():
        if len(sides) == 2:
            continue
        if len(sides) > 2:
            return False
        if not any(all(dot(r, X.rays[i]) == 0 for i in f) for r in real_ineqs):
            return False
    return True


def is_proper(phi):
    """Whether ``A^{-1}(|target|) = |source|``."""
    return all(_covers(phi, mc) for mc in phi.target.max_cones)


def require_proper(phi):
    if not is_proper(phi):
        raise NotProper("morphism is not proper")


# ---------------------------------------------------------------------------
# birational type and pullback


@dataclass
class ExceptionalData:
    exceptional_ray_indices: list
    is_small: bool
    is_divisorial: bool


def classify_birational(phi):
    if not phi.is_birational:
        raise NotBirational("lattice map is not an isomorphism")
    Y = phi.target
    exc = []
    for i, v in enumerate(phi.source.rays):
        if primitive_int(phi.image(v)) not in set(Y.rays):
            exc.append(i)
    return ExceptionalData(exc, not exc, bool(exc))


def pullback_coeffs(phi, coeffs):
    """Coefficients of the pullback of the target divisor with ``coeffs``."""
    from .divisor import TDivisor, cartier_data, support_value

    Y = phi.target
    if Y.n == 0:
        return [Fraction(0)] * len(phi.source.rays)
    D = TDivisor(Y, coeffs)
    cd = cartier_data(D)
    if cd is None:
        raise NotQCartier("target divisor is not Q-Cartier")
    return [-support_value(D, cd, phi.image(v)) for v in phi.source.rays]


def pullback_divisor(phi, D):
    from .divisor import TDivisor

    return TDivisor(phi.source, pullback_coeffs(phi, D.coeffs))


# ---------------------------------------------------------------------------
# fibers


def fiber_fan(phi, tcone):
    """Fan of the reduced fiber over the distinguished point of the target cone.

    Returns ``(fan, multiplicity)``.  ``tcone`` is a set of target ray
    indices (empty for the open orbit).
    """
    require_proper(phi)
    X = phi.source
    tset = frozenset(tcone)
    if not phi.target.is_cone(tset) and tset:
        raise ValueError("not a cone of the target fan")
    over = [c for c in X.cones if phi.cone_map(c) == tset]
    minimal = [c for c in over if not any(o < c for o in over)]
    if len(minimal) != 1:
        raise ReducibleFiber(f"{len(minimal)} minimal cones over the target cone", [sorted(c) for c in minimal])
    s0 = minimal[0]
    # fiber lattice: (N cap A^-1(span tau)) / (N cap span sigma_0)
    L = _preimage_of_span(phi, tset)
    nL = len(L)
    Lcols = transpose([list(b) for b in L]) if L else []

    def coords(v):
        return [int(x) for x in solve(Lcols, list(v), nL)] if nL else []

    k = X.dim_of(s0)
    sat = saturation([coords(X.rays[i]) for i in s0], nL) if s0 else []
    Cinv = inverse(unimodular_completion(sat, nL)) if nL else []
    q = nL - k

    def proj(v):
        c = coords(v)
        return tuple(int(sum(Cinv[r][j] * c[j] for j in range(nL))) for r in range(q))

    members = [c for c in X.cones if s0 <= c and set(phi.cone_map(c)) <= tset]
    maximal = [c for c in members if not any(c < o for o in members)]
    rays = []
    cones = []
    for c in maximal:
        imgs = [proj(X.rays[i]) for i in sorted(c - s0)]
        idx = []
        for w in imgs:
            if is_zero(w):
                continue
            p = primitive_int(w)
            if p not in rays:
                rays.append(p)
            idx.append(rays.index(p))
        cones.append(sorted(set(idx)))
    if q == 0:
        fib = point_fan()
    else:
        fib = validate_fan(rays, cones, lattice=Lattice(q))
    mult = _multiplicity(phi, s0, tset)
    return fib, mult


def _preimage_of_span(phi, tset):
    """Lattice basis of ``N cap A^-1(span tau)``."""
    X, Y = phi.source, phi.target
    if Y.n == 0:
        return [tuple(int(i == j) for j in range(X.n)) for i in range(X.n)]
    normals = nullspace([list(Y.rays[i]) for i in tset], Y.n) if tset else identity(Y.n)
    if not normals:
        return [tuple(int(i == j) for j in range(X.n)) for i in range(X.n)]
    from .linalg import kernel_lattice

    rows = [[x * math.lcm(*(y.denominator for y in r)) for x in r] for r in matmul(normals, phi.matrix)]
    return [tuple(b) for b in kernel_lattice(rows, X.n)]


def _multiplicity(phi, s0, tset):
    """Index of ``A(N cap span(sigma_0))`` in ``N' cap span(sigma')``."""
    Y = phi.target
    if not tset or Y.n == 0:
        return 1
    X = phi.source
    src = saturation([X.rays[i] for i in s0], X.n)
    tgt = saturation([Y.rays[i] for i in tset], Y.n)
    cols = transpose([list(t) for t in tgt])
    coords = []
    for b in src:
        c = solve(cols, list(phi.image(b)))
        coords.append([int(x) for x in c])
    M = transpose(coords)
    _, S, _ = snf(M)
    m = 1
    for i in range(min(len(S), len(S[0]) if S else 0)):
        if S[i][i]:
            m *= S[i][i]
    return m
