"""A Fano fibration over P^1 with a multiple fiber P(1,1,2)."""

from toricmmp import corpus
from toricmmp.divisor import canonical_divisor, picard_number, relative_picard_rank
from toricmmp.intersection import contracted_walls, intersect_wall
from toricmmp.mmp import mmp_run
from toricmmp.morphism import fiber_fan


def main():
    phi = corpus.fano_morphism()
    X, Y = phi.source, phi.target
    K = canonical_divisor(X)
    print("rho(X) =", picard_number(X), " rho(X/P^1) =", relative_picard_rank(phi))
    for w in contracted_walls(phi):
        img = sorted(Y.rays[i] for i in phi.cone_map(w.tau))
        print(f"  wall {sorted(X.rays[i] for i in w.tau)} over {img}: -K.C = {-intersect_wall(K, w)}")
    for t in ((1,), (-1,)):
        fib, mult = fiber_fan(phi, [Y.rays.index(t)])
        print(f"fiber over {t}: rays {fib.rays}, multiplicity {mult}")
    tr = mmp_run(phi, K)
    print("K-MMP over P^1 ends with:", tr.terminal_state)


if __name__ == "__main__":
    main()
