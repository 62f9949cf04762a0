"""Projective completion of fans and of toric morphisms.

A fan that is a subfan of the normal fan of some polyhedron is completed
by truncating that polyhedron far away; an exact LP finds the polyhedron.
The normal fan of the truncated polytope is complete, projective and
contains the input fan.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .cone import Cone, QPolyhedron, double_description, pulling_triangulation
from .divisor import TDivisor, canonical_divisor, cartier_data, is_ample_over, relative_picard_rank
from .errors import (
    CannotPreserveProperty,
    CompletionFailed,
    MergeNotConvex,
    NotAFan,
    NotAFanAfterMerge,
    NotComplete,
    ToricError,
)
from .fan import Fan, cone_intersection, validate_fan
from .intersection import contract_ray, contracted_walls, find_relatively_ample, mori_extremal_rays
from .linalg import dot, is_zero, matmul, primitive_int, rank, saturation, solve
from .lp import linprog
from .mmp import mmp_run
from .morphism import ToricMorphism, check_morphism, identity_morphism, is_proper, to_point
from .singularity import classify

__all__ = [
    "CompletionResult",
    "CompletedMorphism",
    "complete_fan",
    "is_projective",
    "complete_morphism",
    "common_refinement",
    "star_subdivide",
    "polytope_certificate",
]


@dataclass
class CompletionResult:
    completed: Fan
    new_rays: list
    ray_map: list  # index of each original ray in the completed fan
    cone_map: list  # index of each original maximal cone (or None if it became a face)
    ample: TDivisor = None
    already_complete: bool = False


def polytope_certificate(fan):
    """Heights ``h`` and vertices ``u_sigma`` exhibiting ``fan`` inside a normal fan.

    Solves ``<u_sigma, v_i> = h_i`` for rays of ``sigma`` and
    ``<u_sigma, v_j> >= h_j + 1`` otherwise.  Returns ``(h, us)`` or ``None``.
    """
    m = len(fan.rays)
    n = fan.n
    cones = [mc for mc in fan.max_cones if mc]
    nv = m + n * len(cones)
    A_eq, b_eq, A_ge, b_ge = [], [], [], []
    for k, mc in enumerate(cones):
        base = m + n * k
        for j, v in enumerate(fan.rays):
            row = [0] * nv
            for t in range(n):
                row[base + t] = v[t]
            row[j] = -1
            if j in mc:
                A_eq.append(row)
                b_eq.append(0)
            else:
                A_ge.append(row)
                b_ge.append(1)
    res = linprog([0] * nv, A_ge, b_ge, A_eq, b_eq)
    if not res.ok:
        return None
    h = res.x[:m]
    us = [tuple(res.x[m + n * k : m + n * (k + 1)]) for k in range(len(cones))]
    return h, us


def _positively_spans(vecs, n):
    rays, lin = double_description([list(v) for v in vecs], n)
    return not rays and not lin if vecs else n == 0


def _default_directions(fan):
    n = fan.n
    rays = list(fan.rays)
    if rays and _positively_spans(rays, n):
        return []
    dirs = []
    if rays:
        s = [sum(c) for c in zip(*rays)]
        if not is_zero(s):
            dirs.append(primitive_int([-x for x in s]))
    span = saturation(rays, n) if rays else []
    if len(span) < n:
        from .linalg import nullspace

        for b in nullspace([list(v) for v in span], n) if span else nullspace([], n):
            p = primitive_int(b)
            dirs += [p, tuple(-x for x in p)]
    if not _positively_spans(rays + dirs, n):
        dirs = []
        for i in range(n):
            e = tuple(int(i == j) for j in range(n))
            dirs += [e, tuple(-x for x in e)]
    return dirs


def _truncate(fan, directions, cert=None):
    """Normal fan of the certified polyhedron cut by ``<u, w> >= c_w``."""
    n = fan.n
    if cert is None:
        cert = polytope_certificate(fan)
    if cert is None:
        raise CompletionFailed("the fan is not a subfan of a normal fan (no polytope certificate)")
    h, us = cert
    ineqs = [(v, hv) for v, hv in zip(fan.rays, h)]
    heights = list(h)
    dirs = []
    for w in directions:
        w = primitive_int(w)
        if w in dirs:
            continue
        c = min(dot(u, w) for u in us) - 1 if us else Fraction(-1)
        c = Fraction(c.numerator // c.denominator) if isinstance(c, Fraction) else Fraction(c)
        ineqs.append((w, c))
        dirs.append(w)
    P = QPolyhedron(n, ineqs)
    if P.rays or P.lineality:
        raise CompletionFailed("truncation directions do not bound the polyhedron")
    normals = []
    hts = {}
    for (a, b) in ineqs:
        p = primitive_int([int(x) for x in a])
        if p not in hts:
            normals.append(p)
            hts[p] = b
        else:
            hts[p] = max(hts[p], b)
    cones = []
    for u in P.vertices:
        tight = [v for v in normals if dot(u, v) == hts[v]]
        c = Cone(tight, n=n)
        cones.append(frozenset(c.rays))
    used = list(fan.rays) + sorted({r for c in cones for r in c} - set(fan.rays))
    idx = {r: i for i, r in enumerate(used)}
    out = validate_fan(used, [sorted(idx[r] for r in c) for c in set(cones)], lattice=fan.lattice)
    ample = TDivisor(out, [-hts[r] for r in out.rays])
    return out, ample


def complete_fan(fan, directions=None):
    """A complete projective fan containing ``fan`` as a subfan."""
    if fan.is_complete:
        return CompletionResult(fan, [], list(range(len(fan.rays))), list(range(len(fan.max_cones))), None, True)
    if directions is None:
        directions = _default_directions(fan)
    out, ample = _truncate(fan, directions)
    _check_subfan(fan, out)
    if not out.is_complete:
        raise CompletionFailed("internal: truncation did not produce a complete fan")
    new = [r for r in out.rays if r not in set(fan.rays)]
    ray_map = [out.rays.index(r) for r in fan.rays]
    cmap = []
    outc = {frozenset(out.rays[i] for i in mc): k for k, mc in enumerate(out.max_cones)}
    for mc in fan.max_cones:
        cmap.append(outc.get(frozenset(fan.rays[i] for i in mc)))
    return CompletionResult(out, new, ray_map, cmap, ample)


def _check_subfan(small, big, what="fan"):
    bigcones = {frozenset(big.rays[i] for i in c) for c in big.cones}
    for mc in small.max_cones:
        if frozenset(small.rays[i] for i in mc) not in bigcones:
            raise CompletionFailed(f"internal: the {what} is not a subfan of its completion")


def is_projective(fan):
    """An ample divisor on a complete fan, or ``None``."""
    if not fan.is_complete:
        raise NotComplete("projectivity test needs a complete fan")
    if fan.n == 0:
        return TDivisor(fan, [])
    return find_relatively_ample(to_point(fan))


# ---------------------------------------------------------------------------
# fan operations


def common_refinement(F, cones_b, n, lattice=None, keep=()):
    """Refine ``F`` by a list of (possibly non-pointed) cones given as H-descriptions.

    ``cones_b`` is a list of ``(ineqs, eqs)``.  Returns the fan of all
    full-dimensional intersections.
    """
    pieces = set()
    for mc in F.max_cones:
        A = F.cone(mc)
        for ineqs, eqs in cones_b:
            rays, lin = double_description(list(A.facets) + list(ineqs), n, list(A.equations) + list(eqs))
            if lin:
                raise ToricError("internal: refinement piece contains a line")
            if rays and rank(rays) == n:
                pieces.add(frozenset(Cone(rays, n=n).rays))
    order = list(F.rays) + sorted({r for p in pieces for r in p} - set(F.rays))
    used = [r for r in order if any(r in p for p in pieces)]
    idx = {r: i for i, r in enumerate(used)}
    return validate_fan(used, [sorted(idx[r] for r in p) for p in pieces], lattice=lattice or F.lattice)


def star_subdivide(fan, p):
    """Star subdivision at the primitive vector ``p`` (rebased)."""
    p = tuple(p)
    if p in fan.rays:
        return fan
    rays = list(fan.rays) + [p]
    pi = len(rays) - 1
    cones = []
    for mc in fan.max_cones:
        c = fan.cone(mc)
        if not c.contains(p):
            cones.append(list(mc))
            continue
        for f in c.facets:
            if dot(f, p) == 0:
                continue
            face = [i for i in mc if dot(f, fan.rays[i]) == 0]
            cones.append(face + [pi])
        # faces of lower dimension containing p are handled by the facets above
    return validate_fan(rays, cones, lattice=fan.lattice)


def triangulate_new_cones(fan, keep):
    """Pulling triangulation (global ray order) of maximal cones not in ``keep``."""
    keep = set(keep)
    cones = []
    for mc in fan.max_cones:
        key = frozenset(fan.rays[i] for i in mc)
        if key in keep or len(mc) == fan.dim_of(mc):
            cones.append(list(mc))
            continue
        order = {r: i for i, r in enumerate(fan.rays)}
        for simplex in pulling_triangulation([fan.rays[i] for i in mc], fan.n, order=lambda r: order[r]):
            cones.append([order[r] for r in simplex])
    try:
        return validate_fan(list(fan.rays), cones, lattice=fan.lattice)
    except NotAFan as e:
        raise CannotPreserveProperty(f"triangulation conflicts with the original cones: {e}", "qfactorial", e.cones)


# ---------------------------------------------------------------------------
# completion of morphisms


@dataclass
class CompletedMorphism:
    morphism: ToricMorphism  # X-bar -> W-bar
    base: ToricMorphism  # W-bar -> Y-bar
    target_completion: Fan  # Y-bar
    source_ray_map: list
    invariants: dict = field(default_factory=dict)
    ample: TDivisor = None
    mmp_steps: int = 0


def _lift(phi, w):
    X = phi.source
    best = None
    for v in X.rays:
        img = phi.image(v)
        if not is_zero(img) and primitive_int(img) == tuple(w):
            best = v
            break
    if best is not None:
        return best
    A = phi.matrix
    x = solve([list(r) for r in A], list(w))
    if x is None:
        raise CompletionFailed("target ray has no preimage (map not surjective over Q)")
    return primitive_int(x)


def _preimage_hreps(phi, Ybar):
    A = phi.matrix
    n = phi.source.n
    out = []
    for tc in Ybar.max_cones:
        t = Ybar.cone(tc)
        ineqs = [tuple(sum(f[k] * A[k][j] for k in range(len(f))) for j in range(n)) for f in t.facets]
        eqs = [tuple(sum(e[k] * A[k][j] for k in range(len(e))) for j in range(n)) for e in t.equations]
        out.append(([r for r in ineqs if not is_zero(r)], [e for e in eqs if not is_zero(e)]))
    return out


def _terminalize(fan, protected, level):
    """Star-subdivide at shed points until the fan is terminal (or canonical)."""
    for _ in range(200):
        rep = classify(fan)
        if not rep.qgorenstein:
            raise CannotPreserveProperty("completion is not Q-Gorenstein", level, None)
        bad = [(val, p) for p, val in rep.witnesses if (val < 1 if level == "canonical" else True)]
        if not bad:
            return fan
        val, p = min(bad)
        for mc in protected.max_cones:
            if protected.cone(mc).contains(p):
                raise CannotPreserveProperty(f"the original fan is not {level}", level, list(mc))
        fan = star_subdivide(fan, p)
    raise CannotPreserveProperty("terminalization did not stabilise", level, None)


def complete_morphism(phi, options=()):
    """Equivariant projective completion of a proper toric morphism.

    ``options`` is a collection drawn from ``qfactorial``, ``terminal``,
    ``canonical``, ``rho1`` and ``projective``.
    """
    options = set(options)
    unknown = options - {"qfactorial", "terminal", "canonical", "rho1", "projective"}
    if unknown:
        raise ValueError(f"unknown options {sorted(unknown)}")
    if not is_proper(phi):
        raise CompletionFailed("the morphism is not proper")
    X, Y = phi.source, phi.target
    if "qfactorial" in options and not X.is_simplicial:
        raise CannotPreserveProperty("the source fan is not simplicial", "qfactorial", None)
    for level in ("terminal", "canonical"):
        if level in options:
            rep = classify(X)
            ok = rep.is_terminal if level == "terminal" else rep.is_canonical
            if not ok:
                raise CannotPreserveProperty(f"the source fan is not {level}", level, None)
    if "rho1" in options and relative_picard_rank(phi) != 1:
        raise CannotPreserveProperty("rho1 needs an extremal contraction", "rho1", None)

    # (1) complete the target
    Ybar = complete_fan(Y).completed
    # (2) complete the source along lifted target directions and the kernel
    kernel = phi.kernel() if Y.n else [tuple(int(i == j) for j in range(X.n)) for i in range(X.n)]
    dirs = [_lift(phi, w) for w in Ybar.rays] if Y.n else []
    for k in kernel:
        dirs += [tuple(k), tuple(-x for x in k)]
    if X.is_complete:
        Xp = X
    else:
        Xp, _ = _truncate(X, dirs)
    # (3) refine by the preimage of the completed target
    Xb = common_refinement(Xp, _preimage_hreps(phi, Ybar), X.n, X.lattice) if Y.n else Xp
    _check_subfan(X, Xb, "source")
    orig = {frozenset(X.rays[i] for i in mc) for mc in X.max_cones}
    if "qfactorial" in options:
        Xb = triangulate_new_cones(Xb, orig)
    for level in ("terminal", "canonical"):
        if level in options:
            Xb = _terminalize(Xb, X, level)
            break
    _check_subfan(X, Xb, "source")
    fbar = check_morphism(Xb, Ybar, phi.matrix) if Y.n else ToricMorphism(Xb, Ybar, [])
    steps = 0
    base = identity_morphism(Ybar)
    if "rho1" in options:
        fbar, base, steps = _make_rho1(phi, fbar, options)
        Xb = fbar.source
    out = CompletedMorphism(fbar, base, Ybar, [Xb.rays.index(r) for r in X.rays], mmp_steps=steps)
    _verify(phi, out, options)
    return out


def _make_rho1(phi, fbar, options):
    X = phi.source
    orig_walls = {frozenset(X.rays[i] for i in w.tau) for w in contracted_walls(phi)}
    orig_cones = {frozenset(X.rays[i] for i in mc) for mc in X.max_cones}

    def is_phi_ray(f, R):
        Xs = f.source
        return any(frozenset(Xs.rays[i] for i in w.tau) in orig_walls for w in R.walls)

    def touches_original(f, R):
        Xs = f.source
        for w in R.walls:
            for s in w.sides:
                if frozenset(Xs.rays[i] for i in Xs.max_cones[s]) in orig_cones:
                    return True
        return False

    def allowed(f, R):
        return not is_phi_ray(f, R) and not touches_original(f, R)

    if "terminal" in options or "canonical" in options:
        D = canonical_divisor(fbar.source)
    else:
        A = find_relatively_ample(fbar)
        if A is None:
            raise CompletionFailed("internal: no relatively ample divisor on the completion")
        D = -A
    steps = 0
    for _ in range(3):
        if relative_picard_rank(fbar) == 1:
            break
        trace = mmp_run(fbar, D, "first-negative", ray_filter=allowed)
        steps += len(trace.steps)
        fbar = trace.morphism
        D = trace.divisor
        if trace.terminal_state == "minimal-model":
            break
    rays = mori_extremal_rays(fbar)
    target = [R for R in rays if is_phi_ray(fbar, R)]
    if len(target) != 1:
        raise CompletionFailed("the class of the original contraction is not extremal on the completion")
    try:
        phi_R, psi = contract_ray(fbar, target[0])
    except (MergeNotConvex, NotAFanAfterMerge) as e:
        raise CompletionFailed(f"contracting the original class failed: {e}")
    return phi_R, psi, steps


def _verify(phi, out, options):
    X, Y = phi.source, phi.target
    fbar, base = out.morphism, out.base
    Xb, Wb = fbar.source, fbar.target
    inv = out.invariants
    _check_subfan(X, Xb, "source")
    inv["source_complete"] = Xb.is_complete
    inv["target_complete"] = Wb.is_complete
    if not (Xb.is_complete and Wb.is_complete):
        raise CompletionFailed("internal: completion is not complete")
    # the restriction to X agrees with phi
    if Y.n:
        total = matmul(base.matrix, fbar.matrix) if fbar.matrix else [[0] * X.n for _ in range(Y.n)]
        if [list(r) for r in total] != [list(r) for r in phi.matrix]:
            raise CompletionFailed("internal: completed morphism does not restrict to the original")
        wcones = {frozenset(primitive_int(base.image(Wb.rays[i])) for i in c) for c in Wb.cones if c}
        for mc in Y.max_cones:
            if mc and frozenset(Y.rays[i] for i in mc) not in wcones:
                raise CompletionFailed("internal: the original target is not a subfan of the completed target")
    if "qfactorial" in options:
        inv["qfactorial"] = Xb.is_simplicial
        if not Xb.is_simplicial:
            raise CannotPreserveProperty("completion is not simplicial", "qfactorial", None)
    for level in ("terminal", "canonical"):
        if level in options:
            rep = classify(Xb)
            ok = rep.is_terminal if level == "terminal" else rep.is_canonical
            inv[level] = ok
            if not ok:
                cone = rep.singular_cones[0] if rep.singular_cones else None
                raise CannotPreserveProperty(f"completion is not {level}", level, cone)
    if "rho1" in options:
        r = relative_picard_rank(fbar)
        inv["rho"] = r
        if r != 1:
            raise CannotPreserveProperty(f"relative Picard number is {r}", "rho1", None)
    A = find_relatively_ample(fbar)
    inv["relatively_projective"] = A is not None
    out.ample = A
    if "projective" in options:
        if A is None:
            raise CannotPreserveProperty("no relatively ample divisor", "projective", None)
        inv["projective"] = is_projective(Xb) is not None
        if not inv["projective"]:
            raise CannotPreserveProperty("completed source is not projective", "projective", None)
