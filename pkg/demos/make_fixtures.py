"""Write the worked examples as JSON files under fixtures/."""

import sys
from pathlib import Path

from toricmmp import corpus
from toricmmp.divisor import canonical_divisor
from toricmmp.io import divisor_to_json, dumps, fan_to_json, morphism_to_json

FANS = {
    "delta_a": corpus.delta_a,
    "delta_b": corpus.delta_b,
    "delta_c": corpus.delta_c,
    "delta_d": corpus.delta_d,
    "delta_e": corpus.delta_e,
    "delta_f": corpus.delta_f,
    "sato_x": corpus.sato_source,
    "sato_y": corpus.sato_target,
    "fano_x": corpus.fano_source,
    "p1": corpus.p1_fan,
    "morifiber_x": corpus.morifiber_source,
    "morifiber_y": corpus.morifiber_target,
}

MAPS = {
    "flip_map": ("delta_a", "delta_c", corpus.flip_morphism),
    "flipped_map": ("delta_b", "delta_c", corpus.flipped_morphism),
    "nonq_divisorial_map": ("delta_d", "delta_f", corpus.nonq_divisorial),
    "nonq_small_map": ("delta_e", "delta_f", corpus.nonq_small),
    "sato_map": ("sato_x", "sato_y", corpus.sato_morphism),
    "fano_map": ("fano_x", "p1", corpus.fano_morphism),
    "morifiber_map": ("morifiber_x", "morifiber_y", corpus.morifiber_morphism),
}


def write(path, obj):
    path.write_text(dumps(obj) + "\n")


def main(out="fixtures"):
    out = Path(out)
    out.mkdir(exist_ok=True)
    for name, build in FANS.items():
        write(out / f"{name}.json", fan_to_json(build()))
        write(out / f"K_{name}.json", divisor_to_json(canonical_divisor(build())))
    for name, (src, tgt, build) in MAPS.items():
        d = morphism_to_json(build())
        d["source"], d["target"] = f"{src}.json", f"{tgt}.json"
        write(out / f"{name}.json", d)
    (out / "garbage.json").write_text("{ this is not json\n")
    write(out / "overlapping.json", {"rank": 2, "rays": [[1, 0], [0, 1], [1, 1]], "max_cones": [[0, 1], [1, 2]]})


if __name__ == "__main__":
    main(*sys.argv[1:])
