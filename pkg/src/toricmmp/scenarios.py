"""Built-in scenarios: each rebuilds a worked example and checks its listed properties."""

from dataclasses import dataclass, field
from fractions import Fraction

from . import corpus
from .completion import complete_morphism, is_projective
from .divisor import canonical_divisor, is_ample_over, picard_number, relative_picard_rank
from .errors import ToricError, UnknownScenario
from .fan import fan_iso, same_fan
from .intersection import contracted_walls, intersect_wall
from .io import to_jsonable
from .linalg import inverse, matvec
from .mmp import elementary_transform, relative_proj
from .morphism import classify_birational, fiber_fan, is_proper
from .singularity import classify, discrepancy, is_odp, is_qgorenstein

__all__ = ["Assertion", "ScenarioReport", "SCENARIOS", "run_scenario"]


@dataclass
class Assertion:
    label: str
    expected: object
    actual: object

    @property
    def passed(self):
        return self.expected == self.actual

    def to_json(self):
        return {
            "label": self.label,
            "expected": to_jsonable(self.expected),
            "actual": to_jsonable(self.actual),
            "passed": self.passed,
        }


@dataclass
class ScenarioReport:
    name: str
    assertions: list = field(default_factory=list)
    error: str = None

    @property
    def passed(self):
        return self.error is None and all(a.passed for a in self.assertions)

    def check(self, label, expected, actual):
        self.assertions.append(Assertion(label, expected, actual))

    def to_json(self):
        out = {"scenario": self.name, "passed": self.passed, "assertions": [a.to_json() for a in self.assertions]}
        if self.error is not None:
            out["error"] = self.error
        return out

    def to_text(self):
        lines = [f"scenario {self.name}: {'PASS' if self.passed else 'FAIL'}"]
        for a in self.assertions:
            mark = "ok  " if a.passed else "FAIL"
            lines.append(f"  {mark} {a.label}: {_show(a.actual)}")
            if not a.passed:
                lines.append(f"       expected {_show(a.expected)}")
        if self.error:
            lines.append(f"  error: {self.error}")
        return "\n".join(lines)


def _show(x):
    x = to_jsonable(x)
    return str(x)


def _flip(r):
    f = corpus.flip_morphism()
    K = canonical_divisor(f.source)
    fan, psi, Kp = elementary_transform(f, K)
    r.check("flipped fan equals Delta_b", True, same_fan(fan, corpus.delta_b()))
    r.check("relative Picard number of X over Y", 1, relative_picard_rank(f))
    r.check("relative Picard number of X+ over Y", 2, relative_picard_rank(corpus.flipped_morphism()))
    r.check("-K_X ample over Y", True, is_ample_over(-K, f))
    r.check("K_X+ ample over Y", True, is_ample_over(Kp, psi))
    rep_a = classify(corpus.delta_a())
    shed = {tuple(int(x) for x in p) for p, _ in rep_a.witnesses}
    r.check("shed lattice points of Delta_a", {(0, 1, 1), (1, 1, 0), (2, 1, -1)}, shed)
    r.check("Delta_a is canonical, not terminal", "canonical", rep_a.label)
    rep_b = classify(corpus.delta_b())
    r.check("Delta_b is terminal", "terminal", rep_b.label)
    r.check("Delta_b has one singular cone", 1, len(rep_b.singular_cones))
    b = corpus.delta_b()
    odp = [is_odp(b.cone(c)) for c in rep_b.singular_cones]
    r.check("the singular cone of Delta_b is an ordinary double point", [True], odp)


def _sato(r):
    f = corpus.sato_morphism()
    X = f.source
    r.check("Delta_X is simplicial", False, X.is_simplicial)
    r.check("Delta_X is terminal", "terminal", classify(X).label)
    r.check("f is proper", True, is_proper(f))
    r.check("f is birational", True, f.is_birational)
    r.check("relative Picard number of X over Y", 1, relative_picard_rank(f))
    r.check("-K_X ample over Y", True, is_ample_over(-canonical_divisor(X), f))
    exc = classify_birational(f).exceptional_ray_indices
    r.check("exceptional rays", [(1, 1, 0), (0, 1, 1)], [X.rays[i] for i in exc])
    r.check("f is divisorial (two exceptional prime divisors)", True, classify_birational(f).is_divisorial)


def _nonqgor(r):
    f = corpus.nonq_divisorial()
    g = corpus.nonq_small()
    K = canonical_divisor(f.source)
    fan, _, _ = relative_proj(f, K)
    r.check("relative Proj of K over W equals Delta_e", True, same_fan(fan, corpus.delta_e()))
    exc = classify_birational(f)
    r.check("Delta_d -> Delta_f is divisorial", True, exc.is_divisorial)
    r.check("exceptional ray of Delta_d -> Delta_f", [(0, 1, 1)], [f.source.rays[i] for i in exc.exceptional_ray_indices])
    r.check("Delta_e -> Delta_f is small", True, classify_birational(g).is_small)
    r.check("W is not Q-Gorenstein", None, is_qgorenstein(corpus.delta_f()))
    r.check("relative Picard number of V over W", 1, relative_picard_rank(f))
    r.check("relative Picard number of V+ over W", 1, relative_picard_rank(g))


def fano_fiber_walls(phi):
    """Contracted walls lying over the cone generated by +1."""
    Y = phi.target
    plus = frozenset([Y.rays.index((1,))])
    return [w for w in contracted_walls(phi) if phi.cone_map(w.tau) == plus]


def _fano112(r):
    f = corpus.fano_morphism()
    X = f.source
    K = canonical_divisor(X)
    over0 = fano_fiber_walls(f)
    r.check("min of -K_X . C over invariant curves in the fiber over 0", Fraction(3, 2), min(-intersect_wall(K, w) for w in over0))
    rest = [w for w in contracted_walls(f) if w not in over0]
    r.check("min of -K_X . C over invariant curves in the other fibers", 3, min(-intersect_wall(K, w) for w in rest))
    Y = f.target
    fib_p, m_p = fiber_fan(f, [Y.rays.index((1,))])
    fib_m, m_m = fiber_fan(f, [Y.rays.index((-1,))])
    r.check("fiber over 0 is P(1,1,2)", True, fan_iso(fib_p, corpus.weighted_p112()) is not None)
    r.check("multiplicity of the fiber over 0", 2, m_p)
    r.check("fiber over infinity is P^2", True, fan_iso(fib_m, corpus.p2_fan()) is not None)
    r.check("multiplicity of the fiber over infinity", 1, m_m)
    r.check("Picard number of X", 2, picard_number(X))
    r.check("relative Picard number of X over P^1", 1, relative_picard_rank(f))
    r.check("X is simplicial", True, X.is_simplicial)
    r.check("X is projective", True, is_projective(X) is not None)
    r.check("-K_X ample over P^1", True, is_ample_over(-K, f))


def _morifiber_checks(r, f, prefix, base=None):
    X, Y = f.source, f.target
    repY = classify(Y)
    r.check(f"{prefix}target is Q-Gorenstein", True, repY.qgorenstein)
    r.check(f"{prefix}target is not canonical", "not-canonical", repY.label)
    w = corpus.morifiber_target().lattice.from_ambient((Fraction(1, 4), Fraction(1, 4), Fraction(1, 4)))
    if base is not None:
        # transport through the birational base map W -> Y-bar
        w = tuple(int(x) for x in matvec(inverse(base.matrix), w))
    r.check(f"{prefix}discrepancy at (1/4,1/4,1/4)", Fraction(-1, 4), discrepancy(Y, w))
    r.check(f"{prefix}source is simplicial", True, X.is_simplicial)
    r.check(f"{prefix}source is terminal", True, classify(X).is_terminal)
    r.check(f"{prefix}relative Picard number", 1, relative_picard_rank(f))
    r.check(f"{prefix}-K ample over the target", True, is_ample_over(-canonical_divisor(X), f))


def _morifiber(r):
    f = corpus.morifiber_morphism()
    _morifiber_checks(r, f, "")
    out = complete_morphism(f, {"qfactorial", "terminal", "rho1", "projective"})
    fb = out.morphism
    r.check("completion: source complete", True, fb.source.is_complete)
    r.check("completion: target complete", True, fb.target.is_complete)
    r.check("completion: base map is birational", True, out.base.is_birational)
    _morifiber_checks(r, fb, "completion: ", out.base)


SCENARIOS = {
    "sato": _sato,
    "flip": _flip,
    "nonqgor": _nonqgor,
    "fano112": _fano112,
    "morifiber": _morifiber,
}


def run_scenario(name):
    if name not in SCENARIOS:
        raise UnknownScenario(f"unknown scenario {name!r}; choose from {sorted(SCENARIOS)}")
    r = ScenarioReport(name)
    try:
        SCENARIOS[name](r)
    except ToricError as e:
        r.error = f"{type(e).__name__}: {e}"
    return r
