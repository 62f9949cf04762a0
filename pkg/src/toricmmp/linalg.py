"""Exact linear algebra over Z and Q.

Matrices are plain lists of rows; entries are ``int`` or ``Fraction``.
Nothing here ever touches floating point.
"""

from fractions import Fraction
from math import gcd, lcm

from .errors import ZeroVector

__all__ = [
    "Rat",
    "rat",
    "format_rat",
    "dot",
    "matmul",
    "matvec",
    "transpose",
    "identity",
    "rref",
    "rank",
    "nullspace",
    "solve",
    "det",
    "inverse",
    "primitive_int",
    "is_zero",
    "snf",
    "kernel_lattice",
    "column_lattice_basis",
    "saturation",
    "unimodular_completion",
    "integral_solution_index",
    "int_matrix",
]

Rat = Fraction


def rat(x):
    """Coerce ``x`` (int, Fraction, ``"p/q"`` string) to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def format_rat(x):
    x = rat(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def dot(a, b):
    return sum((x * y for x, y in zip(a, b)), 0)


def matvec(A, v):
    return [dot(row, v) for row in A]


def transpose(A, ncols=None):
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


def matmul(A, B):
    Bt = transpose(B)
    return [[dot(row, col) for col in Bt] for row in A]


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def int_matrix(A):
    out = []
    for row in A:
        r = []
        for x in row:
            x = rat(x)
            if x.denominator != 1:
                raise ValueError("matrix is not integral")
            r.append(x.numerator)
        out.append(r)
    return out


def rref(A, ncols=None):
    """Reduced row echelon form over Q.  Returns ``(R, pivot_columns)``."""
    R = [[Fraction(x) for x in row] for row in A]
    n = len(R[0]) if R else (ncols or 0)
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(R)) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        pv = R[r][c]
        R[r] = [x / pv for x in R[r]]
        for i in range(len(R)):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == len(R):
            break
    return R[:r], pivots


def rank(A):
    if not A:
        return 0
    return len(rref(A)[1])


def nullspace(A, ncols):
    """Basis of ``{x : A x = 0}`` as a list of Fraction vectors."""
    if not A:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    R, piv = rref(A, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i, p in enumerate(piv):
            x[p] = -R[i][f]
        basis.append(x)
    return basis


def solve(A, b, ncols=None):
    """One rational solution of ``A x = b`` or ``None`` if inconsistent."""
    n = len(A[0]) if A else (ncols or 0)
    if not A:
        return [Fraction(0)] * n
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, piv = rref(aug, n + 1)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for i, p in enumerate(piv):
        x[p] = R[i][n]
    return x


def det(A):
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            d = -d
        d *= M[c][c]
        for i in range(c + 1, n):
            if M[i][c] != 0:
                f = M[i][c] / M[c][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return d


def inverse(A):
    n = len(A)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    R, piv = rref(aug, 2 * n)
    if piv[:n] != list(range(n)) or len(R) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


def is_zero(v):
    return all(x == 0 for x in v)


def primitive_int(v):
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    v = [rat(x) for x in v]
    if is_zero(v):
        raise ZeroVector("the zero vector has no primitive representative")
    den = lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


# ---------------------------------------------------------------------------
# Smith normal form and integer lattices


def snf(M):
    """Smith normal form ``U M V = S`` with ``U``, ``V`` unimodular.

    The diagonal of ``S`` is non-negative and each entry divides the next.
    Returns ``(U, S, V)`` as integer matrices.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    S = [[int(x) for x in row] for row in M]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in S:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):
        # row_dst += k * row_src
        S[dst] = [a + k * b for a, b in zip(S[dst], S[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        for row in S:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(S[i][j]), i, j) for i in range(t, m) for j in range(t, n) if S[i][j]]
            if not entries:
                break
            _, pi, pj = min(entries)
            swap_rows(t, pi)
            swap_cols(t, pj)
            p = S[t][t]
            clean = True
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(i, t, -(S[i][t] // p))
                    clean = clean and S[i][t] == 0
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(j, t, -(S[t][j] // p))
                    clean = clean and S[t][j] == 0
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if t < m and t < n and S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
        if t >= m or t >= n or S[t][t] == 0:
            break
    return U, S, V


def _int_inverse(U):
    inv = inverse(U)
    return int_matrix(inv)


def kernel_lattice(M, ncols):
    """Integer basis (list of vectors) of ``{x in Z^n : M x = 0}``."""
    if not M:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    M = int_matrix(M)
    _, S, V = snf(M)
    r = sum(1 for i in range(min(len(S), ncols)) if S[i][i] != 0)
    return [tuple(V[i][j] for i in range(ncols)) for j in range(r, ncols)]


def column_lattice_basis(gens, n):
    """Basis of the subgroup of Z^n generated by the integer vectors ``gens``."""
    if not gens:
        return []
    G = transpose([list(g) for g in gens])
    U, S, _ = snf(G)
    Uinv = _int_inverse(U)
    basis = []
    for i in range(min(n, len(gens))):
        s = S[i][i]
        if s == 0:
            break
        basis.append(tuple(s * Uinv[r][i] for r in range(n)))
    return basis


def saturation(vectors, n):
    """Integer basis of ``Z^n`` intersected with the rational span of ``vectors``."""
    vectors = [v for v in vectors if not is_zero(v)]
    if not vectors:
        return []
    perp = nullspace([list(v) for v in vectors], n)
    if not perp:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    perp = [list(primitive_int(p)) for p in perp]
    return kernel_lattice(perp, n)


def unimodular_completion(basis, n):
    """Extend a basis of a saturated sublattice to a basis of Z^n.

    Returns an ``n x n`` unimodular matrix (list of rows) whose last
    ``len(basis)`` columns are ``basis``.  Its first columns span a
    complement; the inverse matrix gives quotient coordinates.
    """
    k = len(basis)
    if k == 0:
        return identity(n)
    B = transpose([list(b) for b in basis])
    U, S, _ = snf(B)
    if any(S[i][i] != 1 for i in range(k)):
        raise ValueError("basis does not span a saturated sublattice")
    # B = U^{-1} [I; 0] V^{-1}, so the first k columns of U^{-1} span the
    # same lattice as B and the remaining ones complete it
    Uinv = _int_inverse(U)
    C = [Uinv[i][k:] + [basis[j][i] for j in range(k)] for i in range(n)]
    if abs(det(C)) != 1:
        raise ValueError("unimodular completion failed")
    return C


def integral_solution_index(A, b, ncols):
    """Smallest positive integer ``l`` with ``A x = l b`` solvable over Z.

    ``A`` is integral, ``b`` rational.  Returns ``None`` if no rational
    solution exists.
    """
    if not A:
        return 1
    A = int_matrix(A)
    U, S, _ = snf(A)
    Ub = matvec(U, [rat(x) for x in b])
    out = 1
    for i, val in enumerate(Ub):
        s = S[i][i] if i < ncols else 0
        if s == 0:
            if val != 0:
                return None
            continue
        q = val / s
        out = lcm(out, q.denominator)
    return out
