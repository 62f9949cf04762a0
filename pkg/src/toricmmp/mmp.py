"""Relative Proj, flips, prescribed blow-downs and the D-MMP driver."""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .cone import Cone, QPolyhedron
from .divisor import (
    TDivisor,
    canonical_divisor,
    cartier_data,
    is_ample_over,
    relative_picard_rank,
    require_cartier,
    support_value,
)
from .errors import (
    EmptySectionPolyhedron,
    MinusDNotAmple,
    NoContractedCurves,
    NoNegativeRay,
    NonBirationalUnsupported,
    NotExceptional,
    NotIrreducible,
    NotQCartier,
    NotSmall,
    PushforwardMismatch,
    TerminationError,
    ToricError,
)
from .fan import cone_intersection, fan_iso, same_fan, validate_fan
from .intersection import contract_ray, intersect_wall, mori_extremal_rays
from .linalg import dot, inverse, primitive_int
from .morphism import check_morphism, classify_birational, compose, require_proper

__all__ = [
    "MMPStep",
    "MMPTrace",
    "relative_proj",
    "elementary_transform",
    "blowdown_prescribed",
    "mmp_run",
    "dagger_model",
    "negativity_check",
    "extremal_length_check",
    "projective_space_fan",
]


# ---------------------------------------------------------------------------
# relative Proj


def relative_proj(phi, D):
    """``Proj_W`` of the section algebra of ``D`` over ``phi: X -> W``.

    Returns ``(fan X+, morphism X+ -> W, divisor D+)``.
    """
    X, W = phi.source, phi.target
    if not phi.is_birational:
        cd = cartier_data(D)
        if cd is not None and is_ample_over(D, phi):
            return X, phi, D
        raise NonBirationalUnsupported("relative Proj is implemented for birational morphisms only")
    n = X.n
    new_cones = []
    for tc in W.max_cones:
        tcone = W.cone(tc)
        members = [i for i, v in enumerate(X.rays) if tcone.contains(phi.image(v))]
        P = QPolyhedron(n, [(X.rays[i], -D.coeffs[i]) for i in members])
        if P.is_empty:
            raise EmptySectionPolyhedron(f"no sections over the target cone {list(tc)}")
        for u in P.vertices:
            tight = [i for i in members if dot(u, X.rays[i]) == -D.coeffs[i]]
            if not tight:
                continue
            c = Cone([X.rays[i] for i in tight], n=n)
            ext = set(c.rays)
            cone = tuple(i for i in tight if X.rays[i] in ext)
            if cone not in new_cones:
                new_cones.append(cone)
    used = sorted({i for c in new_cones for i in c})
    remap = {old: new for new, old in enumerate(used)}
    fan = validate_fan([X.rays[i] for i in used], [[remap[i] for i in c] for c in new_cones], lattice=X.lattice)
    Dp = TDivisor(fan, [D.coeffs[i] for i in used])
    psi = check_morphism(fan, W, phi.matrix)
    if cartier_data(Dp) is None:
        raise ToricError("internal: transformed divisor is not Q-Cartier")
    if not is_ample_over(Dp, psi):
        raise ToricError("internal: transformed divisor is not relatively ample")
    return fan, psi, Dp


def elementary_transform(phi, D):
    """The flip of a small contraction with respect to ``D`` (``-D`` relatively ample)."""
    if not classify_birational(phi).is_small:
        raise NotSmall("the contraction is not small")
    if cartier_data(D) is None:
        raise NotQCartier("divisor is not Q-Cartier")
    if not is_ample_over(-D, phi):
        raise MinusDNotAmple("-D is not ample over the base")
    fan, psi, Dp = relative_proj(phi, D)
    if not classify_birational(psi).is_small:
        raise ToricError("internal: the transformed morphism is not small")
    # isomorphic over the locus where phi is an isomorphism
    X, W = phi.source, phi.target
    xs = {frozenset(X.rays[i] for i in mc) for mc in X.max_cones}
    fs = {frozenset(fan.rays[i] for i in mc) for mc in fan.max_cones}
    for tc in W.max_cones:
        img = frozenset(W.rays[i] for i in tc)
        if img in xs and img not in fs:
            raise ToricError("internal: flip changed the isomorphism locus")
    return fan, psi, Dp


# ---------------------------------------------------------------------------
# prescribed blow-down


@dataclass
class BlowdownResult:
    fan: object
    morphism: object
    divisor: object
    ray: tuple
    discrepancy: Fraction = None


def blowdown_prescribed(g, E):
    """Blow-down of ``Z -> X`` keeping exactly the prescribed exceptional ray.

    ``E`` is a ray index of the source of ``g`` or a divisor supported on
    one ray.
    """
    Z, X = g.source, g.target
    if isinstance(E, TDivisor):
        supp = E.support()
        if len(supp) != 1:
            raise NotIrreducible("the divisor must be supported on exactly one ray")
        e = supp[0]
    else:
        e = int(E)
    require_proper(g)
    exc = classify_birational(g).exceptional_ray_indices
    if e not in exc:
        raise NotExceptional("the ray is not exceptional for the morphism")
    v = Z.rays[e]
    minus_E = TDivisor(Z, [-1 if i == e else 0 for i in range(len(Z.rays))])
    fan, h, Dp = relative_proj(g, minus_E)
    if v not in fan.rays:
        raise ToricError("internal: the prescribed ray was contracted")
    # cones away from the prescribed ray are cones of X
    xs = {frozenset(X.rays[i] for i in mc) for mc in X.max_cones}
    ej = fan.rays.index(v)
    for mc in fan.max_cones:
        if ej not in mc and frozenset(fan.rays[i] for i in mc) not in xs:
            if not any(frozenset(fan.rays[i] for i in mc) <= frozenset(X.rays[j] for j in xc) for xc in X.max_cones):
                raise ToricError("internal: blow-down changed the complement of the prescribed divisor")
    a = None
    KX = canonical_divisor(X)
    cdX = cartier_data(KX)
    if cdX is not None:
        from .singularity import discrepancy

        pull = -support_value(KX, cdX, h.image(v))
        a = Fraction(-1) - pull
        if a != discrepancy(X, h.image(v)):
            raise ToricError("internal: discrepancy equation fails")
    return BlowdownResult(fan, h, Dp, v, a)


# ---------------------------------------------------------------------------
# the MMP


@dataclass
class MMPStep:
    kind: str
    ray: tuple
    before: object
    after: object
    divisor_before: object
    divisor_after: object
    measure: tuple
    rho: int = None
    contraction: object = None


@dataclass
class MMPTrace:
    steps: list = field(default_factory=list)
    terminal_state: str = "minimal-model"
    morphism: object = None
    divisor: object = None
    dagger: object = None
    initial_measure: tuple = None

    @property
    def fan(self):
        return self.morphism.source


STRATEGIES = ("first-negative", "k-trivial-first", "index")


def _test_points(phi):
    X = phi.source
    pts = set()
    for k in range(1, X.n + 1):
        for sub in combinations(X.rays, k):
            p = tuple(sum(c) for c in zip(*sub))
            if any(p):
                pts.add(p)
    return sorted(pts)


def _measure(phi, D, points):
    X = phi.source
    cd = require_cartier(D)
    total = Fraction(0)
    for p in points:
        if X.in_support(p):
            total += support_value(D, cd, p)
    return (len(X.rays), -total)


def _choose(rays, D, cd, strategy, phi):
    neg = [r for r in rays if intersect_wall(D, r.walls[0], cd) < 0]
    if not neg:
        return None
    if strategy == "first-negative":
        return min(neg, key=lambda r: r.direction)
    if strategy == "index":
        return min(neg, key=lambda r: min(sorted(w.tau) for w in r.walls))
    if strategy == "k-trivial-first":
        K = canonical_divisor(phi.source)
        kcd = cartier_data(K)
        if kcd is None:
            raise NotQCartier("K is not Q-Cartier; cannot select K-trivial rays")
        triv = [r for r in neg if intersect_wall(K, r.walls[0], kcd) == 0]
        if not triv:
            raise NoNegativeRay("no K-trivial ray among the D-negative extremal rays")
        return min(triv, key=lambda r: r.direction)
    raise ValueError(f"unknown strategy {strategy!r}")


def mmp_run(phi, D, strategy="first-negative", max_steps=None, ray_filter=None):
    """Run the D-MMP over the target of ``phi``.

    ``ray_filter`` optionally restricts the candidate extremal rays; it is
    called with ``(morphism, ray)``.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    require_proper(phi)
    if cartier_data(D) is None:
        raise NotQCartier("divisor is not Q-Cartier")
    X = phi.source
    if max_steps is None:
        max_steps = max(20, (len(X.rays) + len(X.walls)) ** 2)
    points = _test_points(phi)
    trace = MMPTrace(morphism=phi, divisor=D)
    measure = _measure(phi, D, points)
    trace.initial_measure = measure
    f, Dc = phi, D
    for _ in range(max_steps):
        cd = require_cartier(Dc)
        try:
            rays = mori_extremal_rays(f)
        except NoContractedCurves:
            rays = []
        if ray_filter is not None:
            rays = [r for r in rays if ray_filter(f, r)]
        R = _choose(rays, Dc, cd, strategy, f)
        if R is None:
            trace.morphism, trace.divisor = f, Dc
            trace.terminal_state = "minimal-model"
            return trace
        phi_R, psi = contract_ray(f, R)
        if phi_R.target.n < f.source.n:
            trace.steps.append(
                MMPStep("contraction-fiber", R.direction, f.source, phi_R.target, Dc, None, measure, None, phi_R)
            )
            trace.morphism, trace.divisor = f, Dc
            trace.terminal_state = "fiber-type-stop"
            return trace
        Xp, fp, Dp = relative_proj(phi_R, Dc)
        small = classify_birational(phi_R).is_small
        kind = "contraction-small+flip" if small else "contraction-divisorial"
        newf = compose(fp, psi)
        new_measure = _measure(newf, Dp, points)
        if not new_measure < measure:
            raise TerminationError(f"termination measure did not decrease: {measure} -> {new_measure}")
        try:
            rho = relative_picard_rank(newf)
        except ToricError:
            rho = None
        trace.steps.append(MMPStep(kind, R.direction, f.source, Xp, Dc, Dp, new_measure, rho, phi_R))
        f, Dc, measure = newf, Dp, new_measure
    raise TerminationError(f"MMP did not stop within {max_steps} steps")


def dagger_model(phi, D, strategy="first-negative"):
    """The D-canonical model over the base, computed along two routes."""
    trace = mmp_run(phi, D, strategy)
    if trace.terminal_state != "minimal-model":
        raise ToricError("the MMP ended with a fiber-type contraction")
    fan, _, _ = relative_proj(trace.morphism, trace.divisor)
    try:
        direct, _, _ = relative_proj(phi, D)
    except EmptySectionPolyhedron:
        direct = None
    if direct is not None and not same_fan(direct, fan):
        raise ToricError("internal: the two constructions of the canonical model differ")
    return fan


# ---------------------------------------------------------------------------
# negativity lemma


@dataclass
class NegativityResult:
    fan: object
    E: object
    effective: bool
    exceptional: bool
    nonzero: bool

    @property
    def verdict(self):
        return self.effective and self.exceptional


def negativity_check(phi, g, D, Dp):
    """Compare pullbacks of ``D`` (on ``U``) and ``D'`` (on ``V``) on a common refinement."""
    U, V, W = phi.source, g.source, phi.target
    if not (phi.is_birational and g.is_birational):
        raise NonBirationalUnsupported("the negativity check needs birational morphisms")
    n = W.n
    cdU, cdV = require_cartier(D), require_cartier(Dp)
    for wi, w in enumerate(W.rays):
        cu = _coeff_over(phi, D, w)
        cv = _coeff_over(g, Dp, w)
        if cu != cv:
            raise PushforwardMismatch(f"pushforwards differ on the ray {w}")
    AU_inv = inverse(phi.matrix)
    AV_inv = inverse(g.matrix)

    def to_src(Ainv, v):
        return tuple(int(sum(a * b for a, b in zip(row, v))) for row in Ainv)

    ucones = [Cone([phi.image(U.rays[i]) for i in mc], n=n) for mc in U.max_cones]
    vcones = [Cone([g.image(V.rays[i]) for i in mc], n=n) for mc in V.max_cones]
    pieces = []
    for a in ucones:
        for b in vcones:
            c = cone_intersection(a, b)
            if c.dim == n:
                pieces.append(c.rays)
    rays = sorted({r for p in pieces for r in p})
    Z = validate_fan(rays, [[rays.index(r) for r in p] for p in pieces], lattice=W.lattice)
    coeffs = []
    for z in Z.rays:
        hu = support_value(D, cdU, to_src(AU_inv, z))
        hv = support_value(Dp, cdV, to_src(AV_inv, z))
        coeffs.append(-hu + hv)
    E = TDivisor(Z, coeffs)
    wrays = set(W.rays)
    effective = all(c >= 0 for c in coeffs)
    exceptional = all(c == 0 for z, c in zip(Z.rays, coeffs) if z in wrays)
    trivial = same_fan(U, W) and same_fan(V, W)
    nonzero = not E.is_zero
    if not trivial and not nonzero:
        nonzero = False
    return NegativityResult(Z, E, effective, exceptional, nonzero)


def _coeff_over(phi, D, w):
    X = phi.source
    for i, v in enumerate(X.rays):
        if primitive_int(phi.image(v)) == tuple(w):
            return D.coeffs[i]
    return None


# ---------------------------------------------------------------------------
# extremal length


def projective_space_fan(n):
    from .fan import validate_fan as vf

    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)] + [tuple([-1] * n)]
    cones = [[j for j in range(n + 1) if j != i] for i in range(n + 1)]
    return vf(rays, cones)


@dataclass
class LengthWitness:
    ray: tuple
    wall: object
    value: Fraction
    bound: int
    within_bound: bool
    sharp_bound_holds: bool
    verdict: str


def extremal_length_check(phi, d=0):
    """For each extremal ray the minimum of ``-(K+D).C`` over its invariant curves.

    ``d`` is a boundary coefficient (scalar or per-ray list) in ``[0, 1]``.
    """
    X = phi.source
    if isinstance(d, (list, tuple)):
        coeffs = [Fraction(x) for x in d]
    else:
        coeffs = [Fraction(d)] * len(X.rays)
    if any(c < 0 or c > 1 for c in coeffs):
        raise ValueError("boundary coefficients must lie in [0, 1]")
    KD = TDivisor(X, [c - 1 for c in coeffs])
    cd = cartier_data(KD)
    if cd is None:
        raise NotQCartier("K + D is not Q-Cartier")
    n = X.n
    is_pn = phi.target.n == 0 and len(X.rays) == n + 1 and fan_iso(X, projective_space_fan(n)) is not None
    out = []
    for R in mori_extremal_rays(phi):
        if not R.walls:
            out.append(LengthWitness(R.direction, None, None, n + 1, False, False, "inconclusive"))
            continue
        vals = [(-intersect_wall(KD, w, cd), w) for w in R.walls]
        value, wall = min(vals, key=lambda t: (t[0], sorted(t[1].tau)))
        within = value <= n + 1
        sharp = value <= n or (is_pn and sum(coeffs) < 1)
        verdict = "ok" if within else "inconclusive"
        out.append(LengthWitness(R.direction, wall, value, n + 1, within, sharp, verdict))
    return out
