import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form

from toricmmp.errors import ZeroVector
from toricmmp.linalg import (
    det,
    format_rat,
    inverse,
    kernel_lattice,
    matmul,
    matvec,
    nullspace,
    primitive_int,
    rank,
    rat,
    saturation,
    snf,
    solve,
    unimodular_completion,
)

small = st.integers(-6, 6)


def matrices(rows=st.integers(1, 4), cols=st.integers(1, 4)):
    return st.tuples(rows, cols).flatmap(
        lambda rc: st.lists(st.lists(small, min_size=rc[1], max_size=rc[1]), min_size=rc[0], max_size=rc[0])
    )


@given(matrices())
def test_snf_identity_and_unimodularity(M):
    U, S, V = snf(M)
    assert matmul(matmul(U, M), V) == S
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    diag = [S[i][i] for i in range(min(len(S), len(S[0])))]
    assert all(S[i][j] == 0 for i in range(len(S)) for j in range(len(S[0])) if i != j)
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


@given(matrices())
def test_snf_matches_sympy(M):
    _, S, _ = snf(M)
    ours = sorted(abs(S[i][i]) for i in range(min(len(S), len(S[0]))))
    ref = smith_normal_form(sympy.Matrix(M), domain=sympy.ZZ)
    theirs = sorted(abs(int(ref[i, i])) for i in range(min(ref.rows, ref.cols)))
    assert ours == theirs


def test_snf_small_example():
    _, S, _ = snf([[2, 4], [6, 8]])
    assert S == [[2, 0], [0, 4]]


@given(matrices())
def test_rank_and_nullspace_match_sympy(M):
    n = len(M[0])
    assert rank(M) == sympy.Matrix(M).rank()
    ns = nullspace(M, n)
    assert len(ns) == n - sympy.Matrix(M).rank()
    for v in ns:
        assert all(x == 0 for x in matvec(M, v))


@given(matrices(rows=st.just(3), cols=st.just(3)))
def test_det_and_inverse_match_sympy(M):
    d = det(M)
    assert d == sympy.Matrix(M).det()
    if d:
        inv = inverse(M)
        assert matmul(M, inv) == [[int(i == j) for j in range(3)] for i in range(3)]


@given(matrices(), st.lists(small, min_size=4, max_size=4))
def test_solve(M, b):
    b = b[: len(M)]
    x = solve(M, b)
    consistent = sympy.Matrix(M).rank() == sympy.Matrix(M).row_join(sympy.Matrix(b)).rank()
    assert (x is not None) == consistent
    if x is not None:
        assert matvec(M, x) == [Fraction(v) for v in b]


@given(matrices(rows=st.integers(1, 3), cols=st.integers(2, 4)))
def test_kernel_lattice_is_saturated_basis(M):
    n = len(M[0])
    K = kernel_lattice(M, n)
    assert len(K) == n - sympy.Matrix(M).rank()
    for v in K:
        assert all(x == 0 for x in matvec(M, v))
    if K:
        # a basis of a saturated sublattice has trivial elementary divisors
        _, S, _ = snf([list(col) for col in zip(*K)])
        assert all(S[i][i] == 1 for i in range(len(K)))


@given(st.lists(small, min_size=1, max_size=4).filter(any), st.integers(1, 5))
def test_primitive_int(v, k):
    p = primitive_int([k * x for x in v])
    assert p == primitive_int(v)
    assert math.gcd(*p) == 1
    assert primitive_int([Fraction(x, 7) for x in v]) == p


def test_primitive_of_zero_raises():
    with pytest.raises(ZeroVector):
        primitive_int([0, 0])


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=2))
def test_unimodular_completion(vs):
    S = saturation(vs, 3)
    C = unimodular_completion(S, 3)
    assert abs(det(C)) == 1
    k = len(S)
    for j in range(k):
        assert [C[i][3 - k + j] for i in range(3)] == list(S[j])


def test_rationals_format():
    assert format_rat(Fraction(3, 4)) == "3/4"
    assert format_rat(5) == "5"
    assert rat(" -1/2 ") == Fraction(-1, 2)
    with pytest.raises(TypeError):
        rat(0.5)
