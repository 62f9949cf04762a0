"""Rational polyhedral cones and polyhedra via the double description method.

All vectors here are integer tuples in rebased lattice coordinates.  The
only entry point that speaks ambient coordinates is
:func:`lattice_points_under`, which accepts an optional :class:`Lattice`.
"""

from fractions import Fraction
from functools import cached_property
from itertools import product

from .errors import NotStronglyConvex, UnboundedRegion, ZeroVector
from .linalg import (
    dot,
    inverse,
    is_zero,
    matvec,
    primitive_int,
    rank,
    saturation,
    snf,
    solve,
    transpose,
)

__all__ = [
    "double_description",
    "Cone",
    "QPolyhedron",
    "pulling_triangulation",
    "lattice_points_under",
]


def _prim(v):
    return primitive_int(v) if not is_zero(v) else None


def double_description(ineqs, n, eqs=()):
    """Generators of ``{x in Q^n : a.x >= 0 for a in ineqs, e.x = 0 for e in eqs}``.

    Returns ``(rays, lineality)``: primitive integer vectors such that the
    cone equals ``cone(rays) + span(lineality)``.  The rays are extreme
    modulo the lineality space.
    """
    constraints = [tuple(a) for a in ineqs]
    for e in eqs:
        constraints.append(tuple(e))
        constraints.append(tuple(-x for x in e))
    lin = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rays = []
    processed = []
    for a in constraints:
        if is_zero(a):
            continue
        l0 = next((l for l in lin if dot(a, l) != 0), None)
        if l0 is not None:
            s = dot(a, l0)
            if s < 0:
                l0 = tuple(-x for x in l0)
                s = -s
            new_lin = []
            for l in lin:
                if l is l0 or l == l0 or l == tuple(-x for x in l0):
                    continue
                w = _prim([s * x - dot(a, l) * y for x, y in zip(l, l0)])
                if w is not None:
                    new_lin.append(w)
            lin = new_lin
            new_rays = []
            for r in rays:
                w = _prim([s * x - dot(a, r) * y for x, y in zip(r, l0)])
                if w is not None:
                    new_rays.append(w)
            new_rays.append(tuple(l0))
            rays = _dedupe(new_rays)
            processed.append(a)
            continue
        processed.append(a)
        vals = [dot(a, r) for r in rays]
        pos = [r for r, v in zip(rays, vals) if v > 0]
        zer = [r for r, v in zip(rays, vals) if v == 0]
        neg = [(r, v) for r, v in zip(rays, vals) if v < 0]
        new = pos + zer
        if pos and neg:
            full = rank(processed)
            tight = {r: [b for b in processed if dot(b, r) == 0] for r in rays}
            for p in pos:
                ap = dot(a, p)
                for q, aq in neg:
                    common = [b for b in tight[p] if dot(b, q) == 0]
                    if len(common) < full - 2 or rank(common) != full - 2:
                        continue
                    w = _prim([ap * y - aq * x for x, y in zip(p, q)])
                    if w is not None:
                        new.append(w)
        rays = _dedupe(new)
    return rays, lin


def _dedupe(vecs):
    seen = set()
    out = []
    for v in vecs:
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


def _project_to_span(v, basis_rows):
    """Orthogonal projection of ``v`` onto the span of ``basis_rows``."""
    if not basis_rows:
        return [Fraction(0)] * len(v)
    G = [[Fraction(dot(a, b)) for b in basis_rows] for a in basis_rows]
    rhs = [Fraction(dot(a, v)) for a in basis_rows]
    c = solve(G, rhs)
    return [sum((ci * b[k] for ci, b in zip(c, basis_rows)), Fraction(0)) for k in range(len(v))]


class Cone:
    """The cone generated by integer vectors ``gens`` in ``Z^n``.

    ``strongly_convex`` is checked on construction unless ``allow_lines``.
    """

    def __init__(self, gens, n=None, allow_lines=False):
        gens = [tuple(int(x) for x in g) for g in gens]
        if n is None:
            if not gens:
                raise ValueError("dimension needed for the zero cone")
            n = len(gens[0])
        self.n = n
        if any(is_zero(g) for g in gens):
            raise ZeroVector("cone generators must be nonzero")
        self.gens = _dedupe([primitive_int(g) for g in gens])
        if not allow_lines and not self.is_strongly_convex:
            raise NotStronglyConvex(f"cone over {self.gens} contains a line")

    def __repr__(self):
        return f"Cone({self.gens})"

    @cached_property
    def dim(self):
        return rank(self.gens)

    @cached_property
    def _dual(self):
        return double_description(self.gens, self.n)

    @cached_property
    def equations(self):
        """Integer basis of the orthogonal complement of the span."""
        return list(self._dual[1])

    @cached_property
    def span_basis(self):
        return saturation(self.gens, self.n)

    @cached_property
    def facets(self):
        """Primitive inward facet normals, canonicalized to lie in the span."""
        out = []
        basis = [list(b) for b in self.span_basis]
        for r in self._dual[0]:
            if self.equations:
                w = _project_to_span(r, basis)
            else:
                w = r
            p = _prim(w)
            if p is not None and p not in out:
                out.append(p)
        return out

    @cached_property
    def is_strongly_convex(self):
        if not self.gens:
            return True
        return rank(self.facets) == self.dim if self.facets else self.dim == 0

    @cached_property
    def rays(self):
        """Extreme rays (primitive); for a strongly convex cone these generate it."""
        if not self.gens:
            return []
        out = []
        for g in self.gens:
            tight = [f for f in self.facets if dot(f, g) == 0]
            if self.dim == 1 or (tight and rank(tight) == self.dim - 1):
                out.append(g)
        return out

    def contains(self, v):
        return all(dot(e, v) == 0 for e in self.equations) and all(dot(f, v) >= 0 for f in self.facets)

    def in_relint(self, v):
        return all(dot(e, v) == 0 for e in self.equations) and all(dot(f, v) > 0 for f in self.facets)

    def contains_cone(self, other):
        return all(self.contains(g) for g in other.gens)

    @cached_property
    def is_simplicial(self):
        return len(self.rays) == self.dim

    @cached_property
    def multiplicity(self):
        """Index of the sublattice generated by the rays inside the saturated span."""
        if self.dim == 0:
            return 1
        if not self.is_simplicial:
            raise ValueError("multiplicity is only defined for simplicial cones")
        W = self.coordinates_matrix(self.rays)
        _, S, _ = snf(W)
        m = 1
        for i in range(self.dim):
            m *= S[i][i]
        return m

    @cached_property
    def is_smooth(self):
        return self.is_simplicial and self.multiplicity == 1

    def coordinates_matrix(self, vecs):
        """Integer coordinates of ``vecs`` in ``span_basis`` as a ``dim x len`` matrix."""
        basis_cols = transpose([list(b) for b in self.span_basis])
        cols = []
        for v in vecs:
            c = solve(basis_cols, list(v))
            cols.append([int(x) for x in c])
        return transpose(cols) if cols else [[] for _ in range(self.dim)]

    @cached_property
    def face_ray_sets(self):
        """All faces as frozensets of indices into :attr:`rays`, including {0} and the cone."""
        full = frozenset(range(len(self.rays)))
        zs = []
        for f in self.facets:
            z = frozenset(i for i, r in enumerate(self.rays) if dot(f, r) == 0)
            zs.append(z)
        faces = {full}
        frontier = [full]
        while frontier:
            nxt = []
            for F in frontier:
                for z in zs:
                    G = F & z
                    if G not in faces:
                        faces.add(G)
                        nxt.append(G)
            frontier = nxt
        faces.add(frozenset())
        return sorted(faces, key=lambda s: (len(s), sorted(s)))

    def faces(self):
        out = []
        for s in self.face_ray_sets:
            out.append(Cone([self.rays[i] for i in sorted(s)], n=self.n))
        return out

    def dual_description(self):
        """The cone as a :class:`QPolyhedron` ``{x : f.x >= 0, e.x = 0}``."""
        ineqs = [(f, 0) for f in self.facets]
        for e in self.equations:
            ineqs.append((e, 0))
            ineqs.append((tuple(-x for x in e), 0))
        return QPolyhedron(self.n, ineqs)

    def __eq__(self, other):
        if not isinstance(other, Cone):
            return NotImplemented
        return self.n == other.n and set(self.rays) == set(other.rays)

    def __hash__(self):
        return hash(frozenset(self.rays))


def cone_from_inequalities(ineqs, n, eqs=()):
    rays, lin = double_description(ineqs, n, eqs)
    if lin:
        raise NotStronglyConvex("inequalities define a cone with lineality")
    return Cone(rays, n=n)


class QPolyhedron:
    """``{u in Q^n : a.u >= b for (a, b) in inequalities}``."""

    def __init__(self, n, inequalities):
        self.n = n
        self.inequalities = [(tuple(Fraction(x) for x in a), Fraction(b)) for a, b in inequalities]

    @cached_property
    def _dd(self):
        # homogenize: (u, t) with a.u - b t >= 0 and t >= 0
        rows = []
        for a, b in self.inequalities:
            row = list(a) + [-b]
            den = 1
            for x in row:
                den = den * x.denominator // _gcd(den, x.denominator)
            rows.append(tuple(int(x * den) for x in row))
        rows.append(tuple([0] * self.n + [1]))
        return double_description(rows, self.n + 1)

    @cached_property
    def vertices(self):
        rays, _ = self._dd
        return _dedupe([tuple(Fraction(x, r[-1]) for x in r[:-1]) for r in rays if r[-1] > 0])

    @cached_property
    def rays(self):
        rays, _ = self._dd
        return [r[:-1] for r in rays if r[-1] == 0]

    @cached_property
    def lineality(self):
        return [l[:-1] for l in self._dd[1]]

    @property
    def is_empty(self):
        return not self.vertices

    def contains(self, u):
        return all(dot(a, u) >= b for a, b in self.inequalities)

    def minimize(self, v):
        """``min <u, v>`` over the polyhedron, or ``None`` if unbounded below."""
        if self.is_empty:
            raise ValueError("empty polyhedron")
        if any(dot(l, v) != 0 for l in self.lineality) or any(dot(r, v) < 0 for r in self.rays):
            return None
        return min(dot(u, v) for u in self.vertices)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def pulling_triangulation(rays, n, order=None):
    """Triangulate ``cone(rays)`` into simplicial cones using only its rays.

    ``rays`` are the extreme rays of a strongly convex cone.  Returns a
    list of tuples of rays.  ``order`` is an optional key giving the pulling
    order; by default rays are pulled in the given order.
    """
    rays = [tuple(r) for r in rays]
    if order is not None:
        rays = sorted(rays, key=order)
    extreme = set(Cone(rays, n=n).rays)
    return _pull([r for r in rays if r in extreme], n)


def _pull(rays, n):
    c = Cone(rays, n=n)
    if len(rays) == c.dim:
        return [tuple(rays)]
    apex = rays[0]
    out = []
    for f in c.facets:
        if dot(f, apex) == 0:
            continue
        sub = [r for r in rays if dot(f, r) == 0]
        for s in _pull(sub, n):
            out.append((apex,) + s)
    return out


def _simplex_points(W, n, psi, bound, lower_dim_basis=None):
    """Lattice points ``x`` in the simplicial cone on columns of ``W``."""
    k = len(W)
    if lower_dim_basis is None:
        S_cols = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    else:
        S_cols = lower_dim_basis
    # coordinates of generators in the saturated basis
    Sm = transpose([list(s) for s in S_cols])
    Wc = [[int(x) for x in solve(Sm, list(w))] for w in W]  # row per generator
    Wmat = transpose(Wc)  # k x k, columns = generators
    U, D, V = snf(Wmat)
    Uinv = inverse(U)
    Winv = inverse(Wmat)
    diag = [D[i][i] for i in range(k)]
    psi_w = [dot(psi, w) for w in W]
    if any(p <= 0 for p in psi_w):
        raise UnboundedRegion("functional is not positive on the cone")
    found = set()
    for y in product(*(range(d) for d in diag)):
        x = matvec(Uinv, list(y))
        lam = matvec(Winv, x)
        frac = [l - (l.numerator // l.denominator) for l in lam]
        base = [sum((frac[j] * Wc[j][i] for j in range(k)), Fraction(0)) for i in range(k)]
        p_amb = [sum((base[i] * S_cols[i][m] for i in range(k)), Fraction(0)) for m in range(n)]
        p_amb = tuple(int(x) for x in p_amb)
        val0 = dot(psi, p_amb)
        _enumerate_shifts(p_amb, val0, W, psi_w, bound, 0, found)
    found.discard(tuple([0] * n))
    return found


def _enumerate_shifts(p, val, W, psi_w, bound, i, found):
    if val > bound:
        return
    if i == len(W):
        found.add(p)
        return
    m = 0
    while val + m * psi_w[i] <= bound:
        q = tuple(a + m * b for a, b in zip(p, W[i]))
        _enumerate_shifts(q, val + m * psi_w[i], W, psi_w, bound, i + 1, found)
        m += 1


def lattice_points_under(gens, psi, bound, lattice=None):
    """Nonzero lattice points ``v`` of ``cone(gens)`` with ``psi(v) <= bound``.

    ``gens`` and ``psi`` (a linear functional) are given in ambient
    coordinates; when ``lattice`` is a non-standard :class:`Lattice` the
    result is returned in ambient coordinates as well.
    """
    psi = [Fraction(x) for x in psi]
    bound = Fraction(bound)
    if lattice is not None and not lattice.is_standard:
        igens = [primitive_int(lattice.rebase(g)) for g in gens]
        ipsi = lattice.covector_from_ambient(psi)
    else:
        igens = [primitive_int(g) for g in gens]
        ipsi = psi
    n = len(ipsi)
    cone = Cone(igens, n=n)
    for r in cone.rays:
        if dot(ipsi, r) <= 0:
            raise UnboundedRegion("functional is not positive on the cone")
    basis = None if cone.dim == n else [tuple(b) for b in cone.span_basis]
    pts = set()
    for simplex in pulling_triangulation(cone.rays, n):
        pts |= _simplex_points(list(simplex), n, ipsi, bound, basis)
    out = sorted(pts)
    if lattice is not None and not lattice.is_standard:
        return [lattice.to_ambient(p) for p in out]
    return out
