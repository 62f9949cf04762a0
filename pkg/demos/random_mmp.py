"""Run the MMP on random blow-ups of C^3 and tally the step types."""

import random
import sys
from collections import Counter

from toricmmp.completion import star_subdivide
from toricmmp.divisor import TDivisor, canonical_divisor
from toricmmp.fan import validate_fan
from toricmmp.linalg import primitive_int
from toricmmp.mmp import mmp_run
from toricmmp.morphism import check_morphism

I3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def random_blowup(rng):
    Y = validate_fan([(1, 0, 0), (0, 1, 0), (0, 0, 1)], [(0, 1, 2)])
    X = Y
    for _ in range(rng.randint(1, 4)):
        v = [rng.randint(0, 3) for _ in range(3)]
        if any(v) and primitive_int(v) not in X.rays:
            X = star_subdivide(X, primitive_int(v))
    return check_morphism(X, Y, I3)


def main(runs=50, seed=0):
    rng = random.Random(seed)
    kinds = Counter()
    for k in range(runs):
        phi = random_blowup(rng)
        X = phi.source
        D = canonical_divisor(X) if k % 2 == 0 else TDivisor(X, [rng.randint(-2, 2) for _ in X.rays])
        tr = mmp_run(phi, D)
        kinds.update(s.kind for s in tr.steps)
        kinds[tr.terminal_state] += 1
    for k, v in sorted(kinds.items()):
        print(f"{k}: {v}")


if __name__ == "__main__":
    main(*(int(a) for a in sys.argv[1:]))
