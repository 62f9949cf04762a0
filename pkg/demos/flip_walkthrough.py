"""Walk through a 3-fold flip: contraction, relative Proj, singularities, negativity."""

from toricmmp import corpus
from toricmmp.divisor import canonical_divisor, is_ample_over, relative_picard_rank
from toricmmp.intersection import intersect_wall, mori_extremal_rays
from toricmmp.mmp import elementary_transform, negativity_check
from toricmmp.singularity import classify


def main():
    phi = corpus.flip_morphism()
    X = phi.source
    K = canonical_divisor(X)
    print("X rays:", X.rays)
    print("X cones:", X.max_cones)
    print("rho(X/Y) =", relative_picard_rank(phi))
    (R,) = mori_extremal_rays(phi)
    print("extremal ray", R.direction, "K.C =", intersect_wall(K, R.walls[0]))
    print("-K ample over Y:", is_ample_over(-K, phi))

    fan, psi, Kp = elementary_transform(phi, K)
    print("\nflipped cones:", [sorted(fan.rays[i] for i in mc) for mc in fan.max_cones])
    print("K+ ample over Y:", is_ample_over(Kp, psi))
    print("rho(X+/Y) =", relative_picard_rank(psi))

    for name, f in (("X", X), ("X+", fan)):
        rep = classify(f)
        print(f"{name}: {rep.label}, shed points {[p for p, _ in rep.witnesses]}")

    neg = negativity_check(phi, psi, K, Kp)
    print("\npullback difference on the common refinement:")
    for z, c in zip(neg.fan.rays, neg.E.coeffs):
        if c:
            print(f"  {z}: {c}")
    print("effective and exceptional:", neg.verdict)


if __name__ == "__main__":
    main()
