"""Shared builders and independent oracles for the test suite."""

from fractions import Fraction
from itertools import product

import sympy

from toricmmp.fan import validate_fan
from toricmmp.linalg import primitive_int


def p2():
    return validate_fan([(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])


def p1xp1():
    return validate_fan([(1, 0), (0, 1), (-1, 0), (0, -1)], [(0, 1), (1, 2), (2, 3), (0, 3)])


def hirzebruch(a):
    """F_a: rays u1=(1,0), u2=(0,1), u3=(-1,a), u4=(0,-1)."""
    return validate_fan([(1, 0), (0, 1), (-1, a), (0, -1)], [(0, 1), (1, 2), (2, 3), (0, 3)])


def p3():
    rays = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)]
    return validate_fan(rays, [[j for j in range(4) if j != i] for i in range(4)])


def orthant(n=3):
    return validate_fan([tuple(int(i == j) for j in range(n)) for i in range(n)], [tuple(range(n))])


def sympy_rank(A):
    return sympy.Matrix(A).rank()


def box_points(gens, psi, bound, radius):
    """Naive scan: integer points of the box in cone(gens) with 0 < psi <= bound."""
    M = sympy.Matrix([list(g) for g in gens]).T
    n = M.rows
    out = []
    for p in product(range(-radius, radius + 1), repeat=n):
        if not any(p):
            continue
        val = sum(Fraction(a) * b for a, b in zip(psi, p))
        if val <= 0 or val > bound:
            continue
        if in_cone_lp(gens, p):
            out.append(tuple(p))
    return sorted(out)


def in_cone_lp(gens, p):
    """Membership in cone(gens) via scipy's LP (nonnegative combination)."""
    import numpy as np
    from scipy.optimize import linprog

    A = np.array(gens, dtype=float).T
    res = linprog(np.zeros(A.shape[1]), A_eq=A, b_eq=np.array(p, dtype=float), bounds=[(0, None)] * A.shape[1])
    return res.status == 0


def reid_tai(r, weights):
    """Age sums of the cyclic group 1/r(weights): list over k = 1..r-1."""
    return [sum(Fraction(k * a % r, r) for a in weights) for k in range(1, r)]


def _vertex(rays, coeffs, i, j):
    (a, b), (c, d) = rays[i], rays[j]
    det = a * d - b * c
    r1, r2 = -coeffs[i], -coeffs[j]
    return (Fraction(r1 * d - b * r2, det), Fraction(a * r2 - c * r1, det))


def polygon_oracle(f, coeffs):
    """Nef and ample for a complete rank-2 fan, from the vertices u_sigma of P_D."""
    rays = f.rays
    us = [_vertex(rays, coeffs, *mc) for mc in f.max_cones]

    def slack(u, k):
        return u[0] * rays[k][0] + u[1] * rays[k][1] + coeffs[k]

    nef = all(slack(u, k) >= 0 for u in us for k in range(len(rays)))
    ample = all(slack(u, k) > 0 for u, mc in zip(us, f.max_cones) for k in range(len(rays)) if k not in mc)
    return nef, ample


def multiplicity(vectors):
    """Index of the sublattice spanned by ``vectors`` in its saturation (gcd of maximal minors)."""
    from itertools import combinations
    from math import gcd

    M = sympy.Matrix([list(v) for v in vectors])
    k = M.rows
    g = 0
    for cols in combinations(range(M.cols), k):
        g = gcd(g, int(M[:, list(cols)].det()))
    return abs(g)


def simplicial_wall_numbers(fan, wall):
    """``D_j . V(tau)`` for every ray j, from the wall relation of a simplicial fan."""
    tau = sorted(wall.tau)
    s, t = (fan.max_cones[k] for k in wall.sides)
    (u,) = set(s) - set(tau)
    (w,) = set(t) - set(tau)
    m = multiplicity([fan.rays[i] for i in tau]) if tau else 1
    cu = sympy.Rational(m, multiplicity([fan.rays[i] for i in sorted(s)]))
    cw = sympy.Rational(m, multiplicity([fan.rays[i] for i in sorted(t)]))
    rhs = -(cu * sympy.Matrix(fan.rays[u]) + cw * sympy.Matrix(fan.rays[w]))
    out = [Fraction(0)] * len(fan.rays)
    out[u] += Fraction(int(cu.p), int(cu.q))
    out[w] += Fraction(int(cw.p), int(cw.q))
    if tau:
        V = sympy.Matrix([list(fan.rays[i]) for i in tau]).T
        sol, params = V.gauss_jordan_solve(rhs)
        for i, c in zip(tau, sol):
            c = sympy.Rational(c)
            out[i] += Fraction(int(c.p), int(c.q))
    return out


def random_blowups(rng, max_steps=4, box=3):
    """Star subdivisions of the positive orthant of Z^3 at random primitive points."""
    from toricmmp.completion import star_subdivide
    from toricmmp.morphism import check_morphism

    Y = orthant(3)
    X = Y
    for _ in range(rng.randint(1, max_steps)):
        v = [rng.randint(0, box) for _ in range(3)]
        if not any(v):
            continue
        p = primitive_int(v)
        if p in X.rays:
            continue
        X = star_subdivide(X, p)
    return check_morphism(X, Y, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])


def section_vertex_cones(rays, coeffs, n):
    """Maximal tight ray sets of P = {u : <u, v_i> >= -d_i}, by scipy LP over all rank-n subsets.

    A subset S is tight for a vertex iff some u is equal to -d on S and
    strictly above it elsewhere.
    """
    from itertools import combinations

    import numpy as np
    from scipy.optimize import linprog

    m = len(rays)
    found = set()
    for k in range(n, m + 1):
        for S in combinations(range(m), k):
            if sympy_rank([rays[i] for i in S]) < n:
                continue
            rest = [j for j in range(m) if j not in S]
            # variables u (n) and t; maximize t
            c = np.zeros(n + 1)
            c[-1] = -1
            A_eq = np.array([list(rays[i]) + [0] for i in S], dtype=float)
            b_eq = np.array([-float(coeffs[i]) for i in S])
            A_ub = np.array([[-x for x in rays[j]] + [1] for j in rest], dtype=float) if rest else None
            b_ub = np.array([float(coeffs[j]) for j in rest]) if rest else None
            res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=[(None, None)] * n + [(None, 1)])
            if res.status == 0 and (not rest or res.x[-1] > 1e-9):
                found.add(frozenset(S))
    return found


def overlapping_input(rng):
    """Two cones in z > 0 where one contains an interior point of the other as a ray."""
    while True:
        sigma = [(rng.randint(-3, 3), rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(3)]
        if sympy.Matrix(sigma).det() != 0:
            break
    sigma = [primitive_int(v) for v in sigma]
    p = primitive_int([sum(c) for c in zip(*sigma)])
    other = [primitive_int((rng.randint(-3, 3), rng.randint(-3, 3), rng.randint(1, 3))) for _ in range(rng.randint(1, 3))]
    rays = sigma + [p]
    for o in other:
        if o not in rays:
            rays.append(o)
    tau = list(range(3, len(rays)))
    if len(tau) == 1:
        tau.append(0)
    return rays, [[0, 1, 2], tau]
