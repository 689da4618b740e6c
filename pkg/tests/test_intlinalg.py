import random
from fractions import Fraction

import pytest

from fracgal.intlinalg import (
    abelian_invariants,
    clear_denominators,
    det_rational,
    hnf,
    hnf_with_transform,
    identity_matrix,
    invert_rational,
    kernel_int,
    lattice_contains,
    lattice_index,
    lattice_solve_in,
    mat_mul,
    mat_vec,
    nullspace_rational,
    rank,
    rref,
    snf_with_transform,
    solve_rational,
    subspace_integer_points,
    transpose,
    xgcd,
)

rng = random.Random(20260810)


def random_matrix(m, n, lo=-9, hi=9):
    return [[rng.randint(lo, hi) for _ in range(n)] for _ in range(m)]


def test_xgcd():
    for _ in range(200):
        a, b = rng.randint(-500, 500), rng.randint(-500, 500)
        g, x, y = xgcd(a, b)
        assert g >= 0
        assert x * a + y * b == g
        if a or b:
            assert a % g == 0 and b % g == 0


def test_hnf_transform_properties():
    for _ in range(50):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        A = random_matrix(m, n)
        H, U = hnf_with_transform(A)
        assert mat_mul(U, A) == H
        assert abs(det_rational(U)) == 1
        # canonical: pivots positive, entries above reduced
        prev = -1
        for row in H:
            piv = next((j for j in range(n) if row[j]), None)
            if piv is None:
                continue
            assert piv > prev
            prev = piv
            assert row[piv] > 0


def test_hnf_canonical_for_equal_lattices():
    A = [[2, 0], [0, 3]]
    B = [[2, 3], [4, 3], [2, 6]]
    # same lattice: index-6 sublattice of Z^2 spanned by (2,0),(0,3)
    assert hnf(A) == hnf(B)


def test_kernel_int():
    for _ in range(50):
        m, n = rng.randint(1, 4), rng.randint(1, 6)
        A = random_matrix(m, n)
        K = kernel_int(A)
        for v in K:
            assert all(x == 0 for x in mat_vec(A, v))
        # kernel rank = n - rank(A)
        assert len([r for r in K if any(r)]) == n - rank(A)


def test_snf_properties():
    for _ in range(50):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        A = random_matrix(m, n)
        D, U, V = snf_with_transform(A)
        assert mat_mul(mat_mul(U, A), V) == D
        assert abs(det_rational(U)) == 1
        assert abs(det_rational(V)) == 1
        diag = [D[i][i] for i in range(min(m, n))]
        for i in range(min(m, n)):
            for j in range(min(m, n)):
                if i != j:
                    assert D[i][j] == 0 or (i < j and False)
        for a, b in zip(diag, diag[1:]):
            if a and b:
                assert b % a == 0
            if a == 0:
                assert b == 0


def test_rational_solvers():
    A = [[1, 2], [3, 4]]
    x = solve_rational(A, [5, 6])
    assert mat_vec(A, x) == [Fraction(5), Fraction(6)]
    Ainv = invert_rational(A)
    assert mat_mul(Ainv, A) == [[1, 0], [0, 1]]
    assert det_rational(A) == -2
    assert nullspace_rational([[1, 1, 1]]) != []
    for v in nullspace_rational([[1, 1, 1], [0, 1, 2]]):
        assert sum(v) == 0 and v[1] + 2 * v[2] == 0


def test_inconsistent_solve():
    assert solve_rational([[1, 1], [1, 1]], [0, 1]) is None


def test_subspace_integer_points():
    # the line through (1/2, 1/3): integer points = multiples of (3, 2)
    pts = subspace_integer_points([[Fraction(1, 2), Fraction(1, 3)]])
    assert pts == [[3, 2]]
    # whole space
    pts = subspace_integer_points([[1, 0], [0, 1]])
    assert pts == identity_matrix(2)


def test_lattice_solve_in():
    # {y : y*(1/3) in Z} = 3Z
    L = lattice_solve_in([[Fraction(1, 3)]], [[1]])
    assert L == [[3]]
    # {y in Z^2 : y1/2 + y2/2 in Z} = {y1 + y2 even}
    L = lattice_solve_in([[Fraction(1, 2), Fraction(1, 2)]], [[1]])
    assert lattice_contains(L, [1, 1])
    assert lattice_contains(L, [2, 0])
    assert not lattice_contains(L, [1, 0])


def test_lattice_index():
    big = hnf([[1, 0], [0, 1]])
    small = hnf([[2, 0], [0, 3]])
    assert lattice_index(big, small) == 6
    with pytest.raises(ValueError):
        lattice_index(small, big)


def test_abelian_invariants():
    # Z^2 / <(2,0),(0,4)> = Z/2 x Z/4
    invs, proj = abelian_invariants([[2, 0], [0, 4]], 2)
    assert invs == [2, 4]
    seen = {proj([a, b]) for a in range(2) for b in range(4)}
    assert len(seen) == 8
    # quotient by (1,1),(0,3): Z^2/<...> = Z/3
    invs, proj = abelian_invariants([[1, 1], [0, 3]], 2)
    assert invs == [3]
    assert proj([1, 1]) == (0,)
    # free part shows up as 0
    invs, _ = abelian_invariants([[2, 0]], 2)
    assert invs == [2, 0]


def test_clear_denominators():
    rows, den = clear_denominators([[Fraction(1, 2), Fraction(1, 3)]])
    assert den == 6 and rows == [[3, 2]]
