"""Projective completion of a fan and of a Mori fiber space, plus a non-projective fan."""

from toricmmp import corpus
from toricmmp.completion import complete_fan, complete_morphism, is_projective
from toricmmp.divisor import relative_picard_rank
from toricmmp.fan import validate_fan
from toricmmp.singularity import classify


def twisted_prism():
    v = [(1, 0), (0, 1), (-1, -1)]
    rays = [(x, y, -1) for x, y in v] + [(x, y, 1) for x, y in v] + [(0, 0, 1), (0, 0, -1)]
    cones = [(3, 4, 6), (4, 5, 6), (3, 5, 6), (0, 1, 7), (1, 2, 7), (0, 2, 7)]
    for i in range(3):
        j = (i + 1) % 3
        cones += [(i, j, 3 + i), (3 + i, 3 + j, j)]
    return validate_fan(rays, cones)


def main():
    res = complete_fan(corpus.delta_a())
    print("Delta_a completed with new rays", res.new_rays)
    print("ample divisor:", [str(c) for c in res.ample.coeffs])

    phi = corpus.morifiber_morphism()
    out = complete_morphism(phi, {"qfactorial", "terminal", "rho1", "projective"})
    fb = out.morphism
    print("\ncompleted Mori fiber space:")
    print("  source rays", len(fb.source.rays), "complete", fb.source.is_complete)
    print("  target rays", len(fb.target.rays), "complete", fb.target.is_complete)
    print("  source", classify(fb.source).label, " rho =", relative_picard_rank(fb))
    print("  target", classify(fb.target).label, " index", classify(fb.target).gorenstein_index)

    print("\ntwisted prism is complete:", twisted_prism().is_complete, " projective:", is_projective(twisted_prism()) is not None)


if __name__ == "__main__":
    main()
