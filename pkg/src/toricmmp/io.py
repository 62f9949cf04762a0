"""JSON serialization of fans, divisors, morphisms and reports.

Rationals are written as ``"p/q"`` or ``"p"``; vectors are JSON arrays.
Fans are written in ambient coordinates, so a file round-trips through
:func:`fan_from_json` regardless of the lattice.
"""

import json
from fractions import Fraction
from pathlib import Path

from .divisor import TDivisor
from .errors import ToricError
from .fan import Fan
from .lattice import Lattice
from .linalg import format_rat
from .morphism import check_morphism

__all__ = [
    "MalformedInput",
    "parse_rat",
    "dump_rat",
    "fan_to_json",
    "fan_from_json",
    "divisor_to_json",
    "divisor_from_json",
    "morphism_to_json",
    "morphism_from_json",
    "load_json",
    "to_jsonable",
    "dumps",
]


class MalformedInput(ToricError, ValueError):
    """The input file is not valid JSON or does not have the expected shape."""


def parse_rat(x):
    if isinstance(x, bool):
        raise MalformedInput(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise MalformedInput(f"not a rational: {x!r}")
    raise MalformedInput(f"not a rational: {x!r}")


def dump_rat(x):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else format_rat(x)


def _vec(v):
    if not isinstance(v, list):
        raise MalformedInput(f"expected a vector, got {v!r}")
    return [parse_rat(x) for x in v]


def _looks_like_path(src):
    return isinstance(src, Path) or (isinstance(src, str) and not src.lstrip().startswith(("{", "[")))


def load_json(src):
    """Parse a path, a JSON string or an already-decoded object."""
    if isinstance(src, (dict, list)):
        return src
    try:
        if _looks_like_path(src):
            text = Path(src).read_text()
        else:
            text = src
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as e:
        raise MalformedInput(str(e))


def fan_to_json(fan):
    out = {"rank": fan.n}
    if not fan.lattice.is_standard:
        out["extra_gens"] = [[dump_rat(x) for x in g] for g in fan.lattice.extra_gens]
    out["rays"] = [[dump_rat(x) for x in r] for r in fan.ambient_rays()]
    out["max_cones"] = [sorted(mc) for mc in fan.max_cones]
    return out


def fan_from_json(src):
    d = load_json(src)
    if not isinstance(d, dict) or "rays" not in d or "max_cones" not in d:
        raise MalformedInput("a fan needs 'rays' and 'max_cones'")
    rays = [_vec(r) for r in d["rays"]]
    n = d.get("rank", len(rays[0]) if rays else None)
    if not isinstance(n, int) or n < 0:
        raise MalformedInput("'rank' must be a non-negative integer")
    if any(len(r) != n for r in rays):
        raise MalformedInput("ray length does not match the rank")
    cones = d["max_cones"]
    if not isinstance(cones, list) or not all(isinstance(c, list) for c in cones):
        raise MalformedInput("'max_cones' must be a list of index lists")
    for c in cones:
        if not all(isinstance(i, int) and not isinstance(i, bool) and 0 <= i < len(rays) for i in c):
            raise MalformedInput(f"bad ray index in cone {c}")
    extra = [_vec(g) for g in d.get("extra_gens", [])]
    if any(len(g) != n for g in extra):
        raise MalformedInput("extra generator length does not match the rank")
    lattice = Lattice(n, extra)
    return Fan.from_ambient(rays, [sorted(c) for c in cones], lattice=lattice)


def divisor_to_json(D):
    return {"coeffs": [format_rat(c) for c in D.coeffs]}


def divisor_from_json(src, fan):
    d = load_json(src)
    if not isinstance(d, dict) or not isinstance(d.get("coeffs"), list):
        raise MalformedInput("a divisor needs a 'coeffs' list")
    coeffs = [parse_rat(c) for c in d["coeffs"]]
    if len(coeffs) != len(fan.rays):
        raise MalformedInput(f"expected {len(fan.rays)} coefficients, got {len(coeffs)}")
    return TDivisor(fan, coeffs)


def morphism_to_json(phi):
    """The matrix is written in ambient coordinates."""
    from .linalg import matmul

    X, Y = phi.source, phi.target
    if Y.n == 0:
        M = []
    else:
        M = matmul(matmul(Y.lattice._B, phi.matrix), X.lattice._Binv)
    return {
        "matrix": [[dump_rat(x) for x in row] for row in M],
        "source": fan_to_json(X),
        "target": fan_to_json(Y),
    }


def morphism_from_json(src, base=None):
    """Load a morphism; ``source``/``target`` may be inline fans or file paths.

    Relative paths are resolved against ``base`` (the directory of the file).
    """
    if base is None and _looks_like_path(src):
        base = Path(src).parent
    d = load_json(src)
    if not isinstance(d, dict) or not {"matrix", "source", "target"} <= set(d):
        raise MalformedInput("a morphism needs 'matrix', 'source' and 'target'")

    def sub(x):
        if isinstance(x, str):
            p = Path(x)
            if base is not None and not p.is_absolute():
                p = Path(base) / p
            return fan_from_json(p)
        return fan_from_json(x)

    X, Y = sub(d["source"]), sub(d["target"])
    M = d["matrix"]
    if not isinstance(M, list):
        raise MalformedInput("'matrix' must be a list of rows")
    M = [_vec(row) for row in M]
    return check_morphism(X, Y, M, ambient=True)


def to_jsonable(x):
    """Recursively convert rationals, tuples and frozensets for ``json.dumps``."""
    if isinstance(x, Fraction):
        return dump_rat(x)
    if isinstance(x, bool) or x is None or isinstance(x, (int, str, float)):
        return x
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (frozenset, set)):
        return sorted(to_jsonable(v) for v in x)
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, Fan):
        return fan_to_json(x)
    if isinstance(x, TDivisor):
        return divisor_to_json(x)
    return str(x)


def dumps(obj):
    """Indented JSON with flat lists (vectors, index sets) kept on one line."""

    def enc(x, ind):
        pad = "  " * ind
        if isinstance(x, dict):
            if not x:
                return "{}"
            items = [f'{pad}  {json.dumps(k)}: {enc(v, ind + 1)}' for k, v in x.items()]
            return "{\n" + ",\n".join(items) + "\n" + pad + "}"
        if isinstance(x, list):
            if all(not isinstance(e, (dict, list)) for e in x):
                return json.dumps(x)
            items = [f"{pad}  {enc(e, ind + 1)}" for e in x]
            return "[\n" + ",\n".join(items) + "\n" + pad + "]"
        return json.dumps(x)

    return enc(to_jsonable(obj), 0)
