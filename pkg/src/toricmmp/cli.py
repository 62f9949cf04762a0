"""The ``toric`` command.

Exit status: 0 on success, 1 when a checked property or assertion fails,
2 when the input is malformed.
"""

import argparse
import json
import re
import sys

from .completion import complete_fan, complete_morphism, is_projective
from .divisor import (
    canonical_divisor,
    cartier_data,
    is_ample_over,
    is_nef_over,
    picard_number,
    relative_picard_rank,
)
from .errors import NotAFan, ToricError
from .intersection import contract_ray, curve_classes, mori_extremal_rays
from .io import (
    MalformedInput,
    divisor_from_json,
    divisor_to_json,
    dumps,
    fan_from_json,
    fan_to_json,
    morphism_from_json,
    morphism_to_json,
    to_jsonable,
)
from .mmp import elementary_transform, mmp_run, relative_proj
from .morphism import classify_birational, is_proper
from .scenarios import SCENARIOS, run_scenario
from .singularity import classify

STRATEGY_NAMES = {"first": "first-negative", "k-trivial": "k-trivial-first", "index": "index"}


class _Fail(Exception):
    """A property check failed; carries the report to print."""

    def __init__(self, report):
        self.report = report


def _emit(report, fmt, out=None):
    out = out or sys.stdout
    if fmt == "json":
        out.write(dumps(report) + "\n")
    else:
        out.write(_text(report) + "\n")


def _text(x, indent=0):
    """YAML-like rendering of a JSON report."""
    pad = "  " * indent
    x = to_jsonable(x)
    if isinstance(x, dict):
        lines = []
        for k, v in x.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
        return "\n".join(lines)
    if isinstance(x, list):
        lines = []
        for e in x:
            if isinstance(e, (dict, list)) and not _flat(e):
                body = _text(e, indent + 1)
                lines.append(f"{pad}- " + body.lstrip())
            else:
                lines.append(f"{pad}- {_scalar(e)}")
        return "\n".join(lines)
    return pad + _scalar(x)


def _scalar(v):
    # bare words stay unquoted; anything ambiguous keeps JSON quoting
    if isinstance(v, str) and re.fullmatch(r"[A-Za-z][\w.+-]*", v) and v not in ("true", "false", "null"):
        return v
    return json.dumps(v)


def _flat(v):
    return isinstance(v, list) and all(not isinstance(e, (dict, list)) for e in v)


def _singularity_json(fan):
    rep = classify(fan)
    return {
        "qgorenstein": rep.qgorenstein,
        "gorenstein_index": rep.gorenstein_index,
        "class": rep.label,
        "witnesses": [{"point": fan.lattice.to_ambient(p), "psi_K": v} for p, v in rep.witnesses],
        "singular_cones": [sorted(c) for c in rep.singular_cones],
    }


def _walls_json(X, walls):
    return [{"tau": sorted(w.tau), "sides": list(w.sides)} for w in walls]


# -- subcommands ------------------------------------------------------------


def cmd_fan_check(a):
    try:
        fan = fan_from_json(a.file)
    except NotAFan as e:
        raise _Fail({"valid": False, "error": str(e), "cones": e.cones})
    except ToricError as e:
        if isinstance(e, MalformedInput):
            raise
        raise _Fail({"valid": False, "error": f"{type(e).__name__}: {e}"})
    return {"valid": True, "rank": fan.n, "rays": len(fan.rays), "max_cones": len(fan.max_cones)}


def cmd_fan_props(a):
    fan = fan_from_json(a.file)
    out = {
        "complete": fan.is_complete,
        "simplicial": fan.is_simplicial,
        "smooth": fan.is_smooth,
        "pure": fan.is_pure,
    }
    sing = _singularity_json(fan)
    out["class"] = sing.pop("class")
    out["singularities"] = sing
    if fan.is_complete:
        out["picard_number"] = picard_number(fan)
        out["projective"] = is_projective(fan) is not None
    return out


def cmd_div_check(a):
    fan = fan_from_json(a.fan)
    D = divisor_from_json(a.div, fan)
    cd = cartier_data(D)
    out = {"qcartier": cd is not None}
    if cd is not None:
        out["cartier_index"] = cd.cartier_index
        out["covectors"] = {
            str(list(fan.max_cones[k])): fan.lattice.covector_to_ambient(u) for k, u in sorted(cd.covectors.items())
        }
    if a.require and cd is None:
        raise _Fail(out)
    return out


def cmd_map_check(a):
    phi = morphism_from_json(a.map)
    out = {"compatible": True, "proper": is_proper(phi), "birational": phi.is_birational}
    if phi.is_birational:
        exc = classify_birational(phi)
        out["exceptional_rays"] = [phi.source.lattice.to_ambient(phi.source.rays[i]) for i in exc.exceptional_ray_indices]
        out["small"] = exc.is_small
    if out["proper"]:
        out["relative_picard_number"] = relative_picard_rank(phi)
    if a.require_proper and not out["proper"]:
        raise _Fail(out)
    return out


def _load_map_div(a):
    phi = morphism_from_json(a.map)
    if getattr(a, "div", None):
        D = divisor_from_json(a.div, phi.source)
    else:
        D = canonical_divisor(phi.source)
    return phi, D


def cmd_nef(a):
    phi, D = _load_map_div(a)
    out = {"nef": is_nef_over(D, phi)}
    if not out["nef"]:
        raise _Fail(out)
    return out


def cmd_ample(a):
    phi, D = _load_map_div(a)
    out = {"ample": is_ample_over(D, phi)}
    if not out["ample"]:
        raise _Fail(out)
    return out


def cmd_mori(a):
    phi = morphism_from_json(a.map)
    basis, walls, classes = curve_classes(phi)
    rays = mori_extremal_rays(phi)
    return {
        "basis": basis,
        "walls": _walls_json(phi.source, walls),
        "classes": classes,
        "extremal_rays": [{"direction": R.direction, "walls": [sorted(w.tau) for w in R.walls]} for R in rays],
    }


def cmd_contract(a):
    phi = morphism_from_json(a.map)
    rays = mori_extremal_rays(phi)
    if not 0 <= a.ray < len(rays):
        raise MalformedInput(f"ray index must be in [0, {len(rays)})")
    phi_R, psi = contract_ray(phi, rays[a.ray])
    kind = "fiber" if phi_R.target.n < phi.source.n else (
        "small" if classify_birational(phi_R).is_small else "divisorial"
    )
    return {"ray": rays[a.ray].direction, "type": kind, "contraction": morphism_to_json(phi_R), "base": morphism_to_json(psi)}


def cmd_flip(a):
    phi, D = _load_map_div(a)
    fan, psi, Dp = elementary_transform(phi, D)
    return {"fan": fan_to_json(fan), "divisor": divisor_to_json(Dp)}


def cmd_proj(a):
    phi, D = _load_map_div(a)
    fan, psi, Dp = relative_proj(phi, D)
    return {"fan": fan_to_json(fan), "divisor": divisor_to_json(Dp)}


def cmd_mmp(a):
    phi, D = _load_map_div(a)
    trace = mmp_run(phi, D, STRATEGY_NAMES[a.strategy], max_steps=a.max_steps)
    steps = []
    for s in trace.steps:
        steps.append(
            {
                "kind": s.kind,
                "ray": s.ray,
                "fan": fan_to_json(s.after),
                "divisor": divisor_to_json(s.divisor_after) if s.divisor_after is not None else None,
                "measure": s.measure,
                "relative_picard_number": s.rho,
            }
        )
    return {
        "terminal_state": trace.terminal_state,
        "initial_fan": fan_to_json(phi.source),
        "steps": steps,
        "final_fan": fan_to_json(trace.fan),
        "final_divisor": divisor_to_json(trace.divisor),
    }


def cmd_complete(a):
    preserve = {p for p in (a.preserve or "").split(",") if p}
    if a.map:
        phi = morphism_from_json(a.map)
        opts = set(preserve)
        if a.projective:
            opts.add("projective")
        out = complete_morphism(phi, opts)
        return {
            "morphism": morphism_to_json(out.morphism),
            "base": morphism_to_json(out.base),
            "source_ray_map": out.source_ray_map,
            "invariants": out.invariants,
            "ample": divisor_to_json(out.ample) if out.ample is not None else None,
        }
    if preserve:
        raise MalformedInput("--preserve needs --map")
    fan = fan_from_json(a.fan)
    res = complete_fan(fan)
    out = {
        "already_complete": res.already_complete,
        "fan": fan_to_json(res.completed),
        "new_rays": [res.completed.lattice.to_ambient(r) for r in res.new_rays],
        "ray_map": res.ray_map,
        "cone_map": res.cone_map,
    }
    if a.projective:
        A = is_projective(res.completed)
        out["projective"] = A is not None
        out["ample"] = divisor_to_json(A) if A is not None else None
        if A is None:
            raise _Fail(out)
    return out


def cmd_scenario(a):
    names = sorted(SCENARIOS) if a.name == "all" else [a.name]
    if any(n not in SCENARIOS for n in names):
        raise MalformedInput(f"unknown scenario {a.name!r}; choose from {sorted(SCENARIOS)} or 'all'")
    reports = [run_scenario(n) for n in names]
    if a.format == "text":
        out = {"_text": "\n".join(r.to_text() for r in reports)}
    else:
        out = reports[0].to_json() if len(reports) == 1 else {"scenarios": [r.to_json() for r in reports]}
    if not all(r.passed for r in reports):
        raise _Fail(out)
    return out


def build_parser():
    p = argparse.ArgumentParser(prog="toric", description="Toric minimal model program toolkit.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    sub = p.add_subparsers(dest="command", required=True)

    fan = sub.add_parser("fan", help="fan queries")
    fsub = fan.add_subparsers(dest="fan_command", required=True)
    q = fsub.add_parser("check", parents=[common], help="validate a fan file")
    q.add_argument("file")
    q.set_defaults(func=cmd_fan_check)
    q = fsub.add_parser("props", parents=[common], help="completeness, simpliciality, singularities")
    q.add_argument("file")
    q.set_defaults(func=cmd_fan_props)

    div = sub.add_parser("div", help="divisor queries")
    dsub = div.add_subparsers(dest="div_command", required=True)
    q = dsub.add_parser("check", parents=[common], help="Q-Cartier test and Cartier data")
    q.add_argument("--fan", required=True)
    q.add_argument("--div", required=True)
    q.add_argument("--require", action="store_true", help="exit 1 unless Q-Cartier")
    q.set_defaults(func=cmd_div_check)

    mp = sub.add_parser("map", help="morphism queries")
    msub = mp.add_subparsers(dest="map_command", required=True)
    q = msub.add_parser("check", parents=[common], help="compatibility, properness, birational type")
    q.add_argument("file", metavar="map")
    q.add_argument("--require-proper", action="store_true")
    q.set_defaults(func=cmd_map_check, map=None)

    def map_div(name, func, hlp, div_required=False):
        q = sub.add_parser(name, parents=[common], help=hlp)
        q.add_argument("--map", required=True)
        q.add_argument("--div", required=div_required, help="divisor file (default: canonical divisor)")
        q.set_defaults(func=func)
        return q

    map_div("nef", cmd_nef, "relative nefness (exit 1 if not nef)")
    map_div("ample", cmd_ample, "relative ampleness (exit 1 if not ample)")
    q = sub.add_parser("mori", parents=[common], help="relative Mori cone")
    q.add_argument("--map", required=True)
    q.set_defaults(func=cmd_mori)
    q = sub.add_parser("contract", parents=[common], help="contract an extremal ray")
    q.add_argument("--map", required=True)
    q.add_argument("--ray", type=int, default=0, help="index into the sorted extremal rays")
    q.set_defaults(func=cmd_contract)
    map_div("flip", cmd_flip, "flip of a small contraction")
    map_div("proj", cmd_proj, "relative Proj of a divisor")
    q = map_div("mmp", cmd_mmp, "run the D-MMP")
    q.add_argument("--strategy", choices=sorted(STRATEGY_NAMES), default="first")
    q.add_argument("--max-steps", type=int, default=None)

    q = sub.add_parser("complete", parents=[common], help="projective completion of a fan or morphism")
    q.add_argument("--fan")
    q.add_argument("--map")
    q.add_argument("--projective", action="store_true")
    q.add_argument("--preserve", help="comma list from qfactorial,terminal,canonical,rho1")
    q.set_defaults(func=cmd_complete)

    q = sub.add_parser("scenario", parents=[common], help="run a built-in scenario")
    q.add_argument("name", help=f"one of {', '.join(sorted(SCENARIOS))} or 'all'")
    q.set_defaults(func=cmd_scenario)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else 0
    if a.func is cmd_map_check:
        a.map = a.file
    if a.func is cmd_complete and not (a.fan or a.map):
        print("toric complete: one of --fan or --map is required", file=sys.stderr)
        return 2
    fmt = a.format
    try:
        report = a.func(a)
        code = 0
    except _Fail as f:
        report, code = f.report, 1
    except MalformedInput as e:
        print(f"toric: malformed input: {e}", file=sys.stderr)
        return 2
    except ToricError as e:
        print(f"toric: {type(e).__name__}: {e}", file=sys.stderr)
        report, code = {"ok": False, "error": type(e).__name__, "message": str(e)}, 1
    except (ValueError, TypeError, KeyError, IndexError) as e:
        print(f"toric: malformed input: {e}", file=sys.stderr)
        return 2
    if isinstance(report, dict) and "_text" in report:
        sys.stdout.write(report["_text"] + "\n")
    else:
        _emit(report, fmt)
    return code


if __name__ == "__main__":
    sys.exit(main())
