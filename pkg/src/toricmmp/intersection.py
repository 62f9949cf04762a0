"""Intersection numbers with wall curves, relative Mori cones and contractions."""

from dataclasses import dataclass, field
from fractions import Fraction

from .cone import Cone
from .divisor import TDivisor, cartier_data, relative_class_basis, require_cartier
from .errors import (
    BoundaryWall,
    MergeNotConvex,
    NoContractedCurves,
    NotAFan,
    NotAFanAfterMerge,
    NotStronglyConvex,
)
from .fan import point_fan, validate_fan
from .lattice import Lattice
from .linalg import (
    dot,
    inverse,
    is_zero,
    matmul,
    nullspace,
    primitive_int,
    rank,
    saturation,
    unimodular_completion,
)
from .morphism import ToricMorphism, check_morphism, require_proper

__all__ = [
    "WallCurve",
    "ExtremalRay",
    "intersect",
    "intersect_wall",
    "wall_normal",
    "contracted_walls",
    "contracted_wall_curves",
    "curve_class",
    "mori_extremal_rays",
    "contract_ray",
    "find_relatively_ample",
]


@dataclass(frozen=True)
class WallCurve:
    wall: object
    contracted: bool = True


@dataclass
class ExtremalRay:
    """An extreme ray of ``NE(X/Y)``: primitive direction and the walls on it."""

    direction: tuple
    walls: list = field(default_factory=list)

    def __repr__(self):
        return f"ExtremalRay({self.direction}, walls={[sorted(w.tau) for w in self.walls]})"


def wall_normal(fan, wall):
    """Primitive normal of the wall hyperplane, positive on the second side."""
    if not wall.interior:
        raise BoundaryWall(f"wall {sorted(wall.tau)} has only one side")
    n = fan.n
    if fan.dim_of(fan.max_cones[wall.sides[0]]) != n:
        raise BoundaryWall("intersection numbers need full-dimensional sides")
    tau_rays = [fan.rays[i] for i in wall.tau]
    if tau_rays:
        normals = nullspace([list(r) for r in tau_rays], n)
    else:
        normals = nullspace([], n)
    if len(normals) != 1:
        raise BoundaryWall("wall is not of codimension one")
    q = primitive_int(normals[0])
    other = [i for i in fan.max_cones[wall.sides[1]] if i not in wall.tau]
    if dot(q, fan.rays[other[0]]) < 0:
        q = tuple(-x for x in q)
    return q


def intersect_wall(D, wall, cd=None):
    """``D . V(tau)`` for an interior wall of the fan of ``D``."""
    fan = D.fan
    if cd is None:
        cd = require_cartier(D)
    q = wall_normal(fan, wall)
    s, t = wall.sides
    diff = [a - b for a, b in zip(cd.covectors[s], cd.covectors[t])]
    # diff = delta * q
    k = next(j for j, x in enumerate(q) if x != 0)
    delta = Fraction(diff[k]) / q[k]
    if any(d != delta * x for d, x in zip(diff, q)):
        raise ValueError("inconsistent Cartier data on the wall")
    return delta


def intersect(D, wall):
    return intersect_wall(D, wall)


def contracted_walls(phi):
    """Interior walls whose curves map to points."""
    X = phi.source
    out = []
    for w in X.interior_walls:
        s = X.max_cones[w.sides[0]]
        if X.dim_of(s) != X.n:
            continue
        if phi.cone_map(s) == phi.cone_map(w.tau):
            out.append(w)
    return out


def contracted_wall_curves(phi):
    return [WallCurve(w) for w in contracted_walls(phi)]


def wall_functionals(fan, walls, basis):
    """Intersection numbers of each basis divisor with each wall."""
    out = []
    for b in basis:
        D = TDivisor(fan, b)
        cd = cartier_data(D)
        out.append([intersect_wall(D, w, cd) for w in walls])
    return out


def curve_classes(phi, walls=None):
    """Classes of contracted walls as vectors against a basis of ``N^1(X/Y)``."""
    if walls is None:
        walls = contracted_walls(phi)
    basis = relative_class_basis(phi)
    table = wall_functionals(phi.source, walls, basis)
    classes = [tuple(table[j][i] for j in range(len(basis))) for i in range(len(walls))]
    return basis, walls, classes


def curve_class(phi, wall):
    return curve_classes(phi, [wall])[2][0]


def mori_extremal_rays(phi):
    """Extreme rays of the cone spanned by classes of contracted invariant curves."""
    require_proper(phi)
    basis, walls, classes = curve_classes(phi)
    if not walls or not basis:
        raise NoContractedCurves("the morphism contracts no curves")
    prim = {}
    for w, c in zip(walls, classes):
        if is_zero(c):
            continue
        prim.setdefault(primitive_int(c), []).append(w)
    if not prim:
        raise NoContractedCurves("all contracted curves are numerically trivial")
    cone = Cone(list(prim), n=len(basis))
    rays = [ExtremalRay(r, prim[r]) for r in cone.rays]
    return sorted(rays, key=lambda r: r.direction)


def ray_intersection(D, ray, cd=None):
    """``D . R`` evaluated on a representative wall of the ray."""
    return intersect_wall(D, ray.walls[0], cd)


def _ray_walls(phi, ray):
    """All contracted walls whose class is a positive multiple of the ray."""
    basis, walls, classes = curve_classes(phi)
    out = []
    for w, c in zip(walls, classes):
        if not is_zero(c) and primitive_int(c) == tuple(ray.direction):
            out.append(w)
    return out


class _UF:
    def __init__(self, n):
        self.p = list(range(n))

    def find(self, a):
        while self.p[a] != a:
            self.p[a] = self.p[self.p[a]]
            a = self.p[a]
        return a

    def union(self, a, b):
        self.p[self.find(a)] = self.find(b)


def contract_ray(phi, ray):
    """Contract an extremal ray.  Returns ``(phi_R: X -> W, psi: W -> Y)``."""
    X = phi.source
    n = X.n
    rwalls = _ray_walls(phi, ray)
    uf = _UF(len(X.max_cones))
    for w in rwalls:
        uf.union(*w.sides)
    groups = {}
    for k in range(len(X.max_cones)):
        groups.setdefault(uf.find(k), []).append(k)
    groups = sorted(groups.values())
    hulls = []
    linealities = []
    for g in groups:
        idx = sorted(set().union(*[X.max_cones[k] for k in g]))
        hull = Cone([X.rays[i] for i in idx], n=n, allow_lines=True)
        _check_convex_union(X, g, hull, rwalls)
        hulls.append((g, idx, hull))
        if not hull.is_strongly_convex:
            linealities.append(_lineality(hull))
    if linealities:
        K = saturation([v for L in linealities for v in L], n)
        return _fiber_type(phi, groups, hulls, K)
    rays_w = []
    cones_w = []
    for g, idx, hull in hulls:
        ext = [X.rays[i] for i in idx if X.rays[i] in set(hull.rays)]
        cone_idx = []
        for r in ext:
            if r not in rays_w:
                rays_w.append(r)
            cone_idx.append(rays_w.index(r))
        cones_w.append(cone_idx)
    order = sorted(range(len(rays_w)), key=lambda i: X.rays.index(rays_w[i]))
    remap = {old: new for new, old in enumerate(order)}
    rays_w = [rays_w[i] for i in order]
    cones_w = [sorted(remap[i] for i in c) for c in cones_w]
    try:
        W = validate_fan(rays_w, cones_w, lattice=X.lattice)
    except NotAFan as e:
        raise NotAFanAfterMerge(str(e))
    I = [[int(i == j) for j in range(n)] for i in range(n)]
    phi_R = check_morphism(X, W, I)
    psi = check_morphism(W, phi.target, phi.matrix) if phi.target.n else ToricMorphism(W, phi.target, [])
    return phi_R, psi


def _lineality(hull):
    # lineality of cone(gens) = span of gens intersected with the zero set of all facets
    rows = [list(f) for f in hull.facets] + [list(e) for e in hull.equations]
    if not rows:
        return [tuple(int(i == j) for j in range(hull.n)) for i in range(hull.n)]
    return [primitive_int(v) for v in nullspace(rows, hull.n)]


def _check_convex_union(X, group, hull, rwalls):
    if len(group) == 1:
        return
    gset = set(group)
    internal = {w.tau for w in X.interior_walls if set(w.sides) <= gset}
    for k in group:
        mc = X.max_cones[k]
        d = X.dim_of(mc)
        for f in X.faces_of_max[k]:
            if X.dim_of(f) != d - 1 or f in internal:
                continue
            if not any(all(dot(h, X.rays[i]) == 0 for i in f) for h in hull.facets):
                raise MergeNotConvex(f"merged cones {sorted(group)} do not form a convex cone", sorted(group))


def _fiber_type(phi, groups, hulls, K):
    X = phi.source
    n = X.n
    k = len(K)
    C = unimodular_completion(K, n)
    Cinv = inverse(C)
    q = n - k
    P = [[int(Cinv[r][j]) for j in range(n)] for r in range(q)]

    def proj(v):
        return tuple(sum(P[r][j] * v[j] for j in range(n)) for r in range(q))

    cone_rays = []
    for g, idx, hull in hulls:
        imgs = [primitive_int(proj(X.rays[i])) for i in idx if not is_zero(proj(X.rays[i]))]
        if not imgs:
            continue
        try:
            cone_rays.append(Cone(imgs, n=q).rays)
        except NotStronglyConvex:
            raise MergeNotConvex("image of a merged cone contains a line", sorted(g))
    try:
        if q == 0:
            W = point_fan()
        else:
            rays_w = sorted({r for c in cone_rays for r in c})
            cones_w = [sorted(rays_w.index(r) for r in c) for c in cone_rays]
            W = validate_fan(rays_w, cones_w, lattice=Lattice(q))
    except NotAFan as e:
        raise NotAFanAfterMerge(str(e))
    if q == 0:
        phi_R = ToricMorphism(X, W, [])
    else:
        phi_R = check_morphism(X, W, P)
    # section of the projection: first q columns of C
    S = [[C[i][j] for j in range(q)] for i in range(n)]
    if phi.target.n:
        for v in K:
            if any(x != 0 for x in phi.image(v)):
                raise MergeNotConvex("collapsed directions are not contracted by the base morphism")
        A = matmul(phi.matrix, S) if q else [[] for _ in range(phi.target.n)]
        psi = check_morphism(W, phi.target, A) if q else ToricMorphism(W, phi.target, A)
    else:
        psi = ToricMorphism(W, phi.target, [])
    return phi_R, psi


def find_relatively_ample(phi):
    """A Q-Cartier divisor ample over the target, or ``None``.

    Solved as an exact LP over ``N^1(X/Y)``: every contracted wall must
    have intersection at least one.
    """
    from .lp import linprog

    require_proper(phi)
    basis, walls, classes = curve_classes(phi)
    m = len(phi.source.rays)
    if not walls:
        return TDivisor(phi.source, [0] * m)
    nb = len(basis)
    A = [list(c) for c in classes]
    res = linprog([0] * nb, A, [1] * len(A))
    if not res.ok:
        return None
    coeffs = [sum((res.x[j] * basis[j][i] for j in range(nb)), Fraction(0)) for i in range(m)]
    return TDivisor(phi.source, coeffs)
