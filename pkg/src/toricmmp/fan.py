"""Fans: validation, face closure, walls, global properties and isomorphism."""

from dataclasses import dataclass
from functools import cached_property
from itertools import permutations

from .cone import Cone, double_description
from .errors import EmptyFan, NonPrimitiveRay, NotAFan, NotStronglyConvex, ZeroVector
from .lattice import Lattice
from .linalg import det, inverse, is_zero, matmul, primitive_int, rank, solve, transpose

__all__ = [
    "Fan",
    "Wall",
    "validate_fan",
    "point_fan",
    "is_complete",
    "is_simplicial",
    "is_smooth",
    "walls",
    "fan_iso",
    "same_fan",
    "cone_intersection",
]


@dataclass(frozen=True)
class Wall:
    """A codimension-one cone ``tau`` with its incident maximal cones."""

    tau: frozenset
    sides: tuple

    @property
    def interior(self):
        return len(self.sides) == 2


def cone_intersection(c1, c2):
    """Extreme rays of the intersection of two cones (as a Cone)."""
    ineqs = list(c1.facets) + list(c2.facets)
    eqs = list(c1.equations) + list(c2.equations)
    rays, lin = double_description(ineqs, c1.n, eqs)
    if lin:
        raise NotStronglyConvex("intersection contains a line")
    return Cone(rays, n=c1.n)


class Fan:
    """A fan given by primitive integer rays and maximal cones (ray index sets).

    Rays live in rebased coordinates of ``lattice``; use :meth:`from_ambient`
    and :meth:`ambient_rays` to convert.  Construct through
    :func:`validate_fan` unless the input is known to be valid.
    """

    def __init__(self, rays, max_cones, lattice=None, n=None):
        rays = [tuple(int(x) for x in r) for r in rays]
        if lattice is None:
            if n is None:
                if not rays:
                    raise EmptyFan("cannot infer the rank of a fan without rays")
                n = len(rays[0])
            lattice = Lattice(n)
        self.lattice = lattice
        self.n = lattice.rank
        self.rays = tuple(rays)
        self.max_cones = tuple(tuple(sorted(set(c))) for c in max_cones)

    @classmethod
    def from_ambient(cls, rays, max_cones, lattice=None, primitivize=True):
        if lattice is None:
            lattice = Lattice(len(rays[0]))
        out = []
        for r in rays:
            c = lattice.rebase(r)
            if any(x.denominator != 1 for x in c):
                if not primitivize:
                    raise NonPrimitiveRay(f"ray {r} is not a lattice vector")
            if is_zero(c):
                raise ZeroVector("zero ray")
            p = primitive_int(c)
            if not primitivize and tuple(int(x) for x in c) != p:
                raise NonPrimitiveRay(f"ray {tuple(map(str, r))} is not primitive")
            out.append(p)
        return validate_fan(out, max_cones, lattice=lattice)

    def ambient_rays(self):
        return [self.lattice.to_ambient(r) for r in self.rays]

    def __repr__(self):
        return f"Fan(rays={list(self.rays)}, max_cones={list(self.max_cones)})"

    # -- cones ---------------------------------------------------------------

    def cone(self, idx):
        """The :class:`Cone` spanned by the rays with indices ``idx``."""
        key = frozenset(idx)
        cache = self.__dict__.setdefault("_cone_cache", {})
        if key not in cache:
            cache[key] = Cone([self.rays[i] for i in sorted(key)], n=self.n)
        return cache[key]

    def max_cone_objects(self):
        return [self.cone(c) for c in self.max_cones]

    def dim_of(self, idx):
        if not idx:
            return 0
        return rank([self.rays[i] for i in idx])

    @cached_property
    def faces_of_max(self):
        """For each maximal cone, its faces as frozensets of fan ray indices."""
        out = []
        for mc in self.max_cones:
            if not mc:
                out.append([frozenset()])
                continue
            c = self.cone(mc)
            pos = {r: i for i, r in zip(mc, [self.rays[i] for i in mc])}
            out.append([frozenset(pos[c.rays[j]] for j in s) for s in c.face_ray_sets])
        return out

    @cached_property
    def cones(self):
        """The full face closure as a sorted list of frozensets."""
        allf = set()
        for fs in self.faces_of_max:
            allf.update(fs)
        return sorted(allf, key=lambda s: (len(s), sorted(s)))

    @cached_property
    def cone_set(self):
        return set(self.cones)

    def is_cone(self, idx):
        return frozenset(idx) in self.cone_set

    @cached_property
    def walls(self):
        """All codimension-one faces of maximal cones with their sides."""
        out = {}
        for k, mc in enumerate(self.max_cones):
            d = self.dim_of(mc)
            for f in self.faces_of_max[k]:
                if self.dim_of(f) == d - 1:
                    out.setdefault(f, []).append(k)
        return [Wall(t, tuple(sorted(s))) for t, s in sorted(out.items(), key=lambda kv: sorted(kv[0]))]

    @cached_property
    def interior_walls(self):
        return [w for w in self.walls if w.interior]

    def maximal_cones_containing(self, face):
        face = frozenset(face)
        return [k for k, mc in enumerate(self.max_cones) if face <= set(mc) and face in self.faces_of_max[k]]

    def locate(self, v):
        """Minimal cone (frozenset of ray indices) whose relative interior contains ``v``.

        ``v`` is in rebased coordinates; returns ``None`` outside the support.
        """
        if is_zero(v):
            return frozenset()
        for mc in self.max_cones:
            if not mc:
                continue
            c = self.cone(mc)
            if c.contains(v):
                tight = [f for f in c.facets if sum(a * b for a, b in zip(f, v)) == 0]
                return frozenset(i for i in mc if all(sum(a * b for a, b in zip(f, self.rays[i])) == 0 for f in tight))
        return None

    def in_support(self, v):
        return self.locate(v) is not None

    def ray_index(self, v):
        try:
            return self.rays.index(tuple(v))
        except ValueError:
            return None

    # -- global properties ---------------------------------------------------

    @cached_property
    def is_complete(self):
        if self.n == 0:
            return True
        if any(self.dim_of(mc) != self.n for mc in self.max_cones):
            return False
        return all(w.interior for w in self.walls)

    @cached_property
    def is_simplicial(self):
        return all(len(mc) == self.dim_of(mc) for mc in self.max_cones)

    @cached_property
    def is_smooth(self):
        return all(not mc or self.cone(mc).is_smooth for mc in self.max_cones)

    @cached_property
    def is_pure(self):
        return len({self.dim_of(mc) for mc in self.max_cones}) == 1

    def signature(self):
        """Rays and cones as vectors, for order-independent comparison."""
        rays = frozenset(self.rays)
        cones = frozenset(frozenset(self.rays[i] for i in mc) for mc in self.max_cones)
        return rays, cones


def point_fan():
    """The fan of a point: rank zero, one (zero) cone."""
    return Fan([], [()], lattice=Lattice(0))


def validate_fan(rays, max_cones, lattice=None, n=None):
    """Check the fan axioms and return a :class:`Fan`.

    ``rays`` are integer vectors in rebased coordinates; each must be primitive.
    Cones that are faces of other listed cones are dropped.
    """
    rays = [tuple(int(x) for x in r) for r in rays]
    if lattice is None and n is None and not rays:
        if list(max_cones) == [()] or list(max_cones) == [[]]:
            return point_fan()
        raise EmptyFan("fan has no rays")
    if not max_cones:
        raise EmptyFan("fan has no cones")
    for r in rays:
        if is_zero(r):
            raise ZeroVector("zero ray")
        if primitive_int(r) != r:
            raise NonPrimitiveRay(f"ray {r} is not primitive")
    if len(set(rays)) != len(rays):
        raise NotAFan("duplicate rays")
    cones = []
    for c in max_cones:
        c = tuple(sorted(set(c)))
        for i in c:
            if not 0 <= i < len(rays):
                raise NotAFan(f"ray index {i} out of range", (c,))
        cones.append(c)
    fan = Fan(rays, cones, lattice=lattice, n=n)
    used = set()
    for c in fan.max_cones:
        used.update(c)
        if not c:
            continue
        try:
            cobj = fan.cone(c)
        except NotStronglyConvex:
            raise NotAFan(f"cone {c} is not strongly convex", (c,))
        if len(cobj.rays) != len(c):
            raise NotAFan(f"cone {c} lists generators that are not extreme rays", (c,))
    if used != set(range(len(rays))):
        raise NotAFan("some ray lies in no maximal cone")
    # drop cones that are faces of others
    keep = []
    for a, ca in enumerate(fan.max_cones):
        sa = set(ca)
        if any(b != a and sa <= set(cb) and (sa != set(cb) or b < a) for b, cb in enumerate(fan.max_cones)):
            continue
        keep.append(ca)
    fan = Fan(rays, keep, lattice=fan.lattice)
    m = len(fan.max_cones)
    for a in range(m):
        for b in range(a + 1, m):
            _check_pair(fan, fan.max_cones[a], fan.max_cones[b])
    return fan


def _check_pair(fan, ca, cb):
    A, B = fan.cone(ca), fan.cone(cb)
    common = frozenset(ca) & frozenset(cb)
    ka = fan.max_cones.index(ca)
    kb = fan.max_cones.index(cb)
    if common not in fan.faces_of_max[ka] or common not in fan.faces_of_max[kb]:
        raise NotAFan(f"cones {ca} and {cb} share rays that do not form a common face", (ca, cb))
    inter = cone_intersection(A, B)
    if common:
        C = fan.cone(common)
        ok = all(C.contains(r) for r in inter.rays)
    else:
        ok = not inter.rays
    if not ok:
        raise NotAFan(f"cones {ca} and {cb} overlap outside a common face", (ca, cb))


def is_complete(f):
    return f.is_complete


def is_simplicial(f):
    return f.is_simplicial


def is_smooth(f):
    return f.is_smooth


def walls(f):
    return f.walls


def same_fan(f, g):
    """Equality of fans up to ray order (compared in ambient coordinates)."""
    if f.n != g.n:
        return False
    fa = [tuple(f.lattice.to_ambient(r)) for r in f.rays]
    ga = [tuple(g.lattice.to_ambient(r)) for r in g.rays]
    if set(fa) != set(ga):
        return False
    fc = {frozenset(fa[i] for i in mc) for mc in f.max_cones}
    gc = {frozenset(ga[i] for i in mc) for mc in g.max_cones}
    return fc == gc


def fan_iso(f, g):
    """A unimodular matrix (rebased coordinates) carrying ``f`` onto ``g``, or ``None``."""
    if f.n != g.n or len(f.rays) != len(g.rays) or len(f.max_cones) != len(g.max_cones):
        return None
    n = f.n
    if n == 0:
        return []
    if sorted(len(c) for c in f.max_cones) != sorted(len(c) for c in g.max_cones):
        return None
    fr, gr = list(f.rays), list(g.rays)
    if rank(fr) != n or rank(gr) != n:
        return _fan_iso_degenerate(f, g)
    # pick n independent rays of f, preferring rays of a single maximal cone
    base = []
    for r in fr:
        if rank(base + [r]) > len(base):
            base.append(r)
        if len(base) == n:
            break
    Binv = inverse(transpose([list(b) for b in base]))
    gset = set(gr)
    fcones = {frozenset(fr[i] for i in mc) for mc in f.max_cones}
    gcones = {frozenset(gr[i] for i in mc) for mc in g.max_cones}
    for images in permutations(gr, n):
        if rank(list(images)) != n:
            continue
        A = matmul(transpose([list(x) for x in images]), Binv)
        if any(x.denominator != 1 for row in A for x in row):
            continue
        if abs(det(A)) != 1:
            continue
        A = [[int(x) for x in row] for row in A]
        img = {r: tuple(sum(a * b for a, b in zip(row, r)) for row in A) for r in fr}
        if set(img.values()) != gset:
            continue
        if {frozenset(img[r] for r in c) for c in fcones} == gcones:
            return A
    return None


def _fan_iso_degenerate(f, g):
    # supports spanning a proper subspace: match on the span, complete by a lattice complement
    from .linalg import saturation, unimodular_completion

    n = f.n
    sf = saturation(list(f.rays), n)
    sg = saturation(list(g.rays), n)
    if len(sf) != len(sg):
        return None
    Cf = unimodular_completion(sf, n)
    Cg = unimodular_completion(sg, n)
    k = len(sf)
    Cf_inv = inverse(Cf)
    Cg_inv = inverse(Cg)

    def coords(C_inv, r):
        c = [sum(a * b for a, b in zip(row, r)) for row in C_inv]
        return tuple(int(x) for x in c[n - k:])

    fk = validate_fan([coords(Cf_inv, r) for r in f.rays], f.max_cones, n=k)
    gk = validate_fan([coords(Cg_inv, r) for r in g.rays], g.max_cones, n=k)
    Ak = fan_iso(fk, gk)
    if Ak is None:
        return None
    # block matrix in completed coordinates: identity on the complement, Ak on the span
    M = [[int(i == j) if i < n - k and j < n - k else 0 for j in range(n)] for i in range(n)]
    for i in range(k):
        for j in range(k):
            M[n - k + i][n - k + j] = Ak[i][j]
    A = matmul(matmul(Cg, M), Cf_inv)
    return [[int(x) for x in row] for row in A]


def apply_matrix(A, v):
    return tuple(sum(a * b for a, b in zip(row, v)) for row in A)


def solve_unimodular(A_rows, v):
    return solve(A_rows, list(v))
