"""Exact integer and rational linear algebra: HNF, SNF, kernels, lattices.

Matrices are plain lists of lists (rows) of ints or Fractions.  Everything
here is exact; nothing ever rounds.  Sizes are desk scale (dimensions in the
tens), so the classical algorithms are used without modular tricks.
"""

from __future__ import annotations

from fractions import Fraction


def xgcd(a: int, b: int):
    """Return (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


def mat_copy(A):
    return [row[:] for row in A]


def identity_matrix(n: int):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    n, k = len(A), len(B)
    m = len(B[0]) if B else 0
    assert all(len(row) == k for row in A) or not A
    out = []
    for i in range(n):
        Ai = A[i]
        row = [0] * m
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                for j in range(m):
                    row[j] += a * Bt[j]
        out.append(row)
    return out


def mat_vec(A, v):
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def transpose(A):
    if not A:
        return []
    return [list(col) for col in zip(*A)]


def hnf_with_transform(A):
    """Row-style Hermite normal form.

    Returns (H, U) with U unimodular, U*A = H, H in row HNF: nonzero rows
    first, each pivot positive, entries above a pivot reduced into
    [0, pivot), pivot columns strictly increasing.
    """
    H = [[int(x) for x in row] for row in A]
    m = len(H)
    n = len(H[0]) if m else 0
    U = identity_matrix(m)
    row = 0
    for col in range(n):
        # find a pivot row with nonzero entry in this column
        piv = None
        for i in range(row, m):
            if H[i][col]:
                piv = i
                break
        if piv is None:
            continue
        H[row], H[piv] = H[piv], H[row]
        U[row], U[piv] = U[piv], U[row]
        # clear below via gcd row ops
        for i in range(row + 1, m):
            while H[i][col]:
                a, b = H[row][col], H[i][col]
                if abs(b) < abs(a) or a == 0:
                    H[row], H[i] = H[i], H[row]
                    U[row], U[i] = U[i], U[row]
                    continue
                q = H[i][col] // H[row][col]
                if q:
                    H[i] = [x - q * y for x, y in zip(H[i], H[row])]
                    U[i] = [x - q * y for x, y in zip(U[i], U[row])]
                else:
                    break
        if H[row][col] < 0:
            H[row] = [-x for x in H[row]]
            U[row] = [-x for x in U[row]]
        # reduce entries above the pivot
        p = H[row][col]
        for i in range(row):
            q = H[i][col] // p
            if q:
                H[i] = [x - q * y for x, y in zip(H[i], H[row])]
                U[i] = [x - q * y for x, y in zip(U[i], U[row])]
        row += 1
        if row == m:
            break
    return H, U


def hnf(A):
    H, _ = hnf_with_transform(A)
    return [row for row in H if any(row)]


def hnf_full(A):
    """HNF including zero rows (same row count as A)."""
    H, _ = hnf_with_transform(A)
    return H


def kernel_int(A):
    """Basis (list of rows) of the right integer kernel {x : A x = 0}."""
    m = len(A)
    n = len(A[0]) if m else 0
    if n == 0:
        return []
    At = transpose(A) if m else [[0] * 0 for _ in range(n)]
    if m == 0:
        return identity_matrix(n)
    H, U = hnf_with_transform(At)
    ker = [U[i] for i in range(n) if not any(H[i])]
    return ker


def snf_with_transform(A):
    """Smith normal form.  Returns (D, U, V) with U*A*V = D.

    D is diagonal (rectangular), diagonal entries nonnegative with
    d1 | d2 | ... ; U, V unimodular.
    """
    D = [[int(x) for x in row] for row in A]
    m = len(D)
    n = len(D[0]) if m else 0
    U = identity_matrix(m)
    V = identity_matrix(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        D[dst] = [x + q * y for x, y in zip(D[dst], D[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in D:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        # locate minimal nonzero entry in the trailing block
        piv = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = abs(D[i][j])
                if v and (best is None or v < best):
                    best = v
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    add_row(i, t, -q)
                    if D[i][t]:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    add_col(j, t, -q)
                    if D[t][j]:
                        swap_cols(t, j)
                        dirty = True
        # enforce divisibility of the remaining block by the pivot
        p = D[t][t]
        fixed = True
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if D[i][j] % p:
                    add_row(t, i, 1)
                    fixed = False
                    break
            if not fixed:
                break
        if fixed:
            if D[t][t] < 0:
                D[t] = [-x for x in D[t]]
                U[t] = [-x for x in U[t]]
            t += 1
    return D, U, V


def smith_invariants(A):
    """Nontrivial invariant factors (> 1 ... including 0s for free rank)."""
    D, _, _ = snf_with_transform(A)
    diag = [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]
    return diag


# ---------------------------------------------------------------------------
# rational matrices


def frac_matrix(A):
    return [[Fraction(x) for x in row] for row in A]


def rref(A):
    """Reduced row echelon form over Q.  Returns (R, pivots)."""
    R = frac_matrix(A)
    m = len(R)
    n = len(R[0]) if m else 0
    pivots = []
    row = 0
    for col in range(n):
        piv = None
        for i in range(row, m):
            if R[i][col]:
                piv = i
                break
        if piv is None:
            continue
        R[row], R[piv] = R[piv], R[row]
        inv = 1 / R[row][col]
        R[row] = [x * inv for x in R[row]]
        for i in range(m):
            if i != row and R[i][col]:
                f = R[i][col]
                R[i] = [x - f * y for x, y in zip(R[i], R[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    return R, pivots


def rank(A):
    _, pivots = rref(A)
    return len(pivots)


def solve_rational(A, b):
    """One solution x of A x = b over Q, or None if inconsistent.

    A is m x n, b length m.  Free variables are set to 0.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    aug = [list(row) + [b[i]] for i, row in enumerate(A)]
    R, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for r, c in enumerate(pivots):
        x[c] = R[r][n]
    return x


def nullspace_rational(A):
    """Basis of {x : A x = 0} over Q (list of vectors)."""
    m = len(A)
    n = len(A[0]) if m else 0
    if n == 0:
        return []
    if m == 0:
        return [[Fraction(i == j) for j in range(n)] for i in range(n)]
    R, pivots = rref(A)
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -R[r][f]
        basis.append(v)
    return basis


def det_rational(A):
    n = len(A)
    M = frac_matrix(A)
    det = Fraction(1)
    for col in range(n):
        piv = None
        for i in range(col, n):
            if M[i][col]:
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det *= M[col][col]
        inv = 1 / M[col][col]
        for i in range(col + 1, n):
            if M[i][col]:
                f = M[i][col] * inv
                M[i] = [x - f * y for x, y in zip(M[i], M[col])]
    return det


def invert_rational(A):
    n = len(A)
    aug = [list(map(Fraction, A[i])) + [Fraction(i == j) for j in range(n)]
           for i in range(n)]
    R, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ZeroDivisionError("matrix not invertible")
    return [row[n:] for row in R]


def clear_denominators(rows):
    """Scale rational rows to integers.  Returns (int_rows, lcm)."""
    from math import gcd

    den = 1
    for row in rows:
        for x in row:
            f = Fraction(x)
            den = den * f.denominator // gcd(den, f.denominator)
    out = [[int(Fraction(x) * den) for x in row] for row in rows]
    return out, den


# ---------------------------------------------------------------------------
# lattices (integer row spans, possibly scaled rational lattices)


def lattice_contains(H, v):
    """Is integer vector v in the row span of HNF basis H?"""
    v = list(v)
    n = len(v)
    for row in H:
        piv = next((j for j in range(n) if row[j]), None)
        if piv is None:
            continue
        if v[piv] % row[piv]:
            return False
        q = v[piv] // row[piv]
        if q:
            v = [x - q * y for x, y in zip(v, row)]
    return not any(v)


def subspace_integer_points(span_rows):
    """Basis of V ∩ Z^n where V = Q-span of the given rational rows."""
    if not span_rows:
        return []
    n = len(span_rows[0])
    # x in V  <=>  K x = 0, rows of K spanning the orthogonal complement
    K = nullspace_rational(list(span_rows))
    if not K:
        return identity_matrix(n)
    Kint, _ = clear_denominators(K)
    return hnf(kernel_int(Kint))


def lattice_solve_in(C, L_rows):
    """Lattice {y integer : C y ∈ Z-span(L_rows)}, C rational m x k.

    Returns an HNF basis of the y-lattice (rows of length k).  L_rows are
    rational; both are cleared to a common integer scale first.
    """
    m = len(C)
    k = len(C[0]) if m else 0
    if not L_rows:
        # require C y = 0
        Cint, _ = clear_denominators(C)
        return hnf(kernel_int(Cint))
    scaled, _ = clear_denominators(list(C) + list(L_rows))
    Ci = scaled[:m]
    Li = scaled[m:]
    # solve Ci y - Li^T z = 0 over Z, project onto y
    At = transpose(Ci)
    LT = transpose(Li)  # m x r
    r = len(Li)
    big = [Ci[i] + [-LT[i][j] for j in range(r)] for i in range(m)]
    ker = kernel_int(big)
    ys = [row[:k] for row in ker]
    return hnf(ys)


def rational_preimage_lattice(C_cols, L_rows):
    """Basis of {y in Q^k : sum_j y_j C_cols[j] in Z-span(L_rows)}.

    Requires the columns to be linearly independent (the map injective).
    Returns rational row vectors of length k spanning the solution lattice.
    """
    k = len(C_cols)
    if k == 0:
        return []
    # conditions cutting out V = span(C_cols): K x = 0
    K = nullspace_rational(list(C_cols))
    if K:
        Kint, _ = clear_denominators(K)
        # z with L^T z in V: (K L^T) z = 0
        LT = transpose(L_rows)
        KL = mat_mul(Kint, [[Fraction(x) for x in row] for row in LT])
        KLint, _ = clear_denominators(KL)
        zbasis = kernel_int(KLint)
    else:
        zbasis = identity_matrix(len(L_rows))
    out = []
    for z in zbasis:
        x = [sum(Fraction(z[i]) * Fraction(L_rows[i][j])
                 for i in range(len(L_rows)))
             for j in range(len(L_rows[0]))]
        y = solve_rational(transpose(C_cols), x)
        assert y is not None, "preimage solve failed"
        out.append(y)
    # drop dependent rows via HNF on a cleared copy while keeping exact values
    return [row for row in out if any(row)]


def lattice_index(H_big, H_small):
    """Index [big : small] of full-rank sublattice, both HNF bases, same rank."""
    if len(H_big) != len(H_small):
        raise ValueError("lattices must have equal rank")
    # solve small = X * big over Q; index = |det X|
    Xrows = []
    for v in H_small:
        x = solve_rational(transpose(H_big), v)
        if x is None:
            raise ValueError("not a sublattice")
        Xrows.append(x)
    d = det_rational(Xrows)
    if d.denominator != 1:
        raise ValueError("not a sublattice")
    return abs(int(d))


def abelian_invariants(rel_rows, ngens: int):
    """Invariants of Z^ngens / row-span, with coordinate map.

    Returns (invs, proj) where invs is the list of invariant factors > 1
    (finite case: no zeros unless the quotient is infinite, in which case
    zeros appear), and proj(v) maps an exponent vector to coordinates in
    prod Z/invs[i].
    """
    if not rel_rows:
        rel_rows = [[0] * ngens]
    D, _, V = snf_with_transform(rel_rows)
    diag = [D[i][i] if i < len(D) and i < len(D[i]) else 0
            for i in range(ngens)]
    keep = [i for i in range(ngens) if diag[i] != 1]
    invs = [diag[i] for i in keep]

    def proj(v):
        w = mat_vec(transpose(V), v)  # coordinates x·V
        out = []
        for i in keep:
            d = diag[i]
            out.append(w[i] % d if d else w[i])
        return tuple(out)

    return invs, proj
