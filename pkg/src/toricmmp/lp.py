"""A small exact linear-programming solver (two-phase tableau simplex).

Bland's rule prevents cycling.  Problems in this package have at most a
few dozen variables, so a dense Fraction tableau is plenty.
"""

from dataclasses import dataclass
from fractions import Fraction

__all__ = ["LPResult", "linprog", "strictly_feasible"]


@dataclass
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: list = None
    value: Fraction = None

    @property
    def ok(self):
        return self.status == "optimal"


def _pivot(T, r, c):
    pv = T[r][c]
    row = T[r]
    if pv != 1:
        T[r] = row = [x / pv for x in row]
    nz = [j for j, x in enumerate(row) if x != 0]
    for i, other in enumerate(T):
        if i == r:
            continue
        f = other[c]
        if f != 0:
            for j in nz:
                other[j] -= f * row[j]


def _simplex(T, basis, ncols):
    """Minimize the objective stored in the last row of ``T`` (reduced costs)."""
    m = len(T) - 1
    while True:
        obj = T[m]
        enter = next((j for j in range(ncols) if obj[j] < 0), None)
        if enter is None:
            return "optimal"
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return "unbounded"
        r = best[1]
        _pivot(T, r, enter)
        basis[r] = enter


def linprog(c, A_ge=(), b_ge=(), A_eq=(), b_eq=(), nonneg=None):
    """Minimize ``c.x`` subject to ``A_ge x >= b_ge`` and ``A_eq x = b_eq``.

    Variables are free unless their index is in ``nonneg``.
    """
    n = len(c)
    nonneg = set(nonneg or ())
    # column layout: x_j^+ for all j, then x_j^- for free j, then surplus
    free = [j for j in range(n) if j not in nonneg]
    neg_col = {j: n + k for k, j in enumerate(free)}
    nvar = n + len(free)
    rows = []
    rhs = []
    for a, b in zip(A_ge, b_ge):
        rows.append(("ge", a))
        rhs.append(Fraction(b))
    for a, b in zip(A_eq, b_eq):
        rows.append(("eq", a))
        rhs.append(Fraction(b))
    nsurplus = sum(1 for kind, _ in rows if kind == "ge")
    ncols = nvar + nsurplus
    m = len(rows)
    T = []
    s = 0
    for (kind, a), b in zip(rows, rhs):
        row = [Fraction(0)] * (ncols + m + 1)
        for j in range(n):
            v = Fraction(a[j])
            row[j] = v
            if j in neg_col:
                row[neg_col[j]] = -v
        if kind == "ge":
            row[nvar + s] = Fraction(-1)
            s += 1
        row[-1] = b
        if b < 0:
            row = [-x for x in row]
        T.append(row)
    # artificials
    for i in range(m):
        T[i][ncols + i] = Fraction(1)
    basis = [ncols + i for i in range(m)]
    total = ncols + m
    obj = [Fraction(0)] * (total + 1)
    for i in range(m):
        for j in range(ncols):
            obj[j] -= T[i][j]
        obj[-1] -= T[i][-1]
    T.append(obj)
    _simplex(T, basis, ncols)
    if T[m][-1] != 0:
        return LPResult("infeasible")
    # drive artificials out of the basis
    for i in range(m):
        if basis[i] >= ncols:
            j = next((j for j in range(ncols) if T[i][j] != 0), None)
            if j is not None:
                _pivot(T, i, j)
                basis[i] = j
    keep = [i for i in range(m) if basis[i] < ncols]
    T2 = [T[i][:ncols] + [T[i][-1]] for i in keep]
    basis2 = [basis[i] for i in keep]
    cost = [Fraction(0)] * (ncols + 1)
    for j in range(n):
        cost[j] = Fraction(c[j])
        if j in neg_col:
            cost[neg_col[j]] = -Fraction(c[j])
    for i, bcol in enumerate(basis2):
        cb = cost[bcol]
        if cb != 0:
            cost = [x - cb * y for x, y in zip(cost, T2[i])]
    T2.append(cost)
    status = _simplex(T2, basis2, ncols)
    if status == "unbounded":
        return LPResult("unbounded")
    y = [Fraction(0)] * ncols
    for i, bcol in enumerate(basis2):
        y[bcol] = T2[i][-1]
    x = [y[j] - (y[neg_col[j]] if j in neg_col else 0) for j in range(n)]
    value = sum((Fraction(cj) * xj for cj, xj in zip(c, x)), Fraction(0))
    return LPResult("optimal", x, value)


def strictly_feasible(A_gt, A_ge=(), b_ge=(), A_eq=(), b_eq=(), n=None):
    """Find ``x`` with ``A_gt x > 0``, ``A_ge x >= b_ge``, ``A_eq x = b_eq``.

    Homogeneous strict rows are normalized to ``>= 1`` (valid whenever the
    remaining constraints are homogeneous too, which is how this is used).
    Returns the point or ``None``.
    """
    if n is None:
        n = len((list(A_gt) or list(A_ge) or list(A_eq))[0])
    A = list(A_gt) + list(A_ge)
    b = [1] * len(A_gt) + list(b_ge)
    res = linprog([0] * n, A, b, A_eq, b_eq)
    return res.x if res.ok else None
