"""Exact dense linear algebra over Z and Q.

Matrices are tuples of row tuples of Python ints (or Fractions where noted).
Sizes are tiny (rank <= 24), so everything is dense and straightforward.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Matrix = tuple[tuple[int, ...], ...]
Vec = tuple[int, ...]


def as_matrix(rows: Iterable[Iterable]) -> Matrix:
    return tuple(tuple(r) for r in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zeros(m: int, n: int) -> Matrix:
    return tuple((0,) * n for _ in range(m))


def transpose(A: Sequence[Sequence]) -> Matrix:
    return tuple(zip(*A)) if A else ()


def mat_mul(A: Sequence[Sequence], B: Sequence[Sequence]) -> Matrix:
    Bt = list(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A)


def mat_vec(A: Sequence[Sequence], x: Sequence) -> tuple:
    return tuple(sum(a * b for a, b in zip(row, x)) for row in A)


def dot(x: Sequence, y: Sequence) -> int:
    return sum(a * b for a, b in zip(x, y))


def mat_add(A, B) -> Matrix:
    return tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_sub(A, B) -> Matrix:
    return tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_scale(c, A) -> Matrix:
    return tuple(tuple(c * a for a in row) for row in A)


def block_diag(*blocks: Sequence[Sequence[int]]) -> Matrix:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        k = len(b)
        for i in range(k):
            for j in range(k):
                out[off + i][off + j] = b[i][j]
        off += k
    return as_matrix(out)


def trace(A) -> int:
    return sum(A[i][i] for i in range(len(A)))


def mat_pow(A: Matrix, k: int) -> Matrix:
    if k < 0:
        raise ValueError("negative exponent")
    result = identity(len(A))
    base = A
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def det(A: Sequence[Sequence[int]]) -> int:
    """Integer determinant by fraction-free Bareiss elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * pivot - M[i][k] * M[k][j]) // prev
        prev = pivot
    return sign * M[n - 1][n - 1]


def rational_inverse(A: Sequence[Sequence]) -> tuple[tuple[Fraction, ...], ...]:
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        M[c], M[p] = M[p], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return tuple(tuple(row[n:]) for row in M)


def integer_inverse(A: Sequence[Sequence[int]]) -> Matrix:
    """Inverse of a unimodular integer matrix; raises if not integral."""
    inv = rational_inverse(A)
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not unimodular")
        out.append(tuple(int(x) for x in row))
    return tuple(out)


def content(v: Iterable[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def primitive(v: Sequence[int]) -> Vec:
    """Divide out the content and fix the sign so the first nonzero entry is positive."""
    g = content(v)
    if g == 0:
        return tuple(v)
    w = [x // g for x in v]
    for x in w:
        if x:
            if x < 0:
                w = [-y for y in w]
            break
    return tuple(w)


def smith_normal_form(A: Sequence[Sequence[int]]) -> tuple[list[int], Matrix, Matrix]:
    """Smith normal form with transforms.

    Returns ``(diag, U, V)`` with ``U @ A @ V`` equal to the m x n matrix
    carrying ``diag`` on its main diagonal; U and V are unimodular and each
    diagonal entry divides the next (zeros trail).
    """
    m = len(A)
    n = len(A[0]) if m else 0
    M = [list(r) for r in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        M[i], M[j] = M[j], M[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):
        # row_dst += c * row_src
        M[dst] = [a + c * b for a, b in zip(M[dst], M[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, c):
        for row in M:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]

    diag = []
    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if M[i][j] and (best is None or abs(M[i][j]) < abs(M[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            changed = False
            for i in range(t + 1, m):
                while M[i][t]:
                    add_row(i, t, -(M[i][t] // M[t][t]))
                    if M[i][t]:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, n):
                while M[t][j]:
                    add_col(j, t, -(M[t][j] // M[t][t]))
                    if M[t][j]:
                        swap_cols(t, j)
                        changed = True
            if changed:
                continue
            p = M[t][t]
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if M[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if M[t][t] < 0:
            M[t] = [-x for x in M[t]]
            U[t] = [-x for x in U[t]]
        diag.append(M[t][t])
    return diag, as_matrix(U), as_matrix(V)


def integer_kernel(A: Sequence[Sequence[int]], ncols: int | None = None) -> list[Vec]:
    """Basis of the saturated integer kernel {x in Z^n : A x = 0}."""
    n = ncols if ncols is not None else len(A[0])
    if not A:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    diag, _, V = smith_normal_form(A)
    r = len(diag)
    return [tuple(V[i][j] for i in range(n)) for j in range(r, n)]


def symmetric_diagonalize(G: Sequence[Sequence[int]], order: Sequence[int] | None = None):
    """Exact rational congruence diagonalization of a nondegenerate symmetric matrix.

    Returns ``(P, d)`` where the columns of P are the new basis vectors
    (in old coordinates) and ``P^T G P = diag(d)``.  ``order`` permutes the
    starting basis, which changes the pivots chosen.
    """
    n = len(G)
    order = list(range(n)) if order is None else list(order)
    # working basis: columns of P stored as rows in `basis`
    basis = [[Fraction(int(i == k)) for i in range(n)] for k in order]
    A = [[Fraction(G[order[i]][order[j]]) for j in range(n)] for i in range(n)]

    def swap(i, j):
        A[i], A[j] = A[j], A[i]
        for row in A:
            row[i], row[j] = row[j], row[i]
        basis[i], basis[j] = basis[j], basis[i]

    d = []
    for k in range(n):
        p = next((i for i in range(k, n) if A[i][i] != 0), None)
        if p is None:
            # all remaining diagonal entries vanish; use b_i <- b_i + b_j
            pair = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if A[i][j] != 0), None)
            if pair is None:
                raise ZeroDivisionError("degenerate form")
            i, j = pair
            basis[i] = [a + b for a, b in zip(basis[i], basis[j])]
            for c in range(n):
                A[i][c] += A[j][c]
            for r in range(n):
                A[r][i] += A[r][j]
            p = i
        swap(k, p)
        piv = A[k][k]
        for j in range(k + 1, n):
            c = A[k][j] / piv
            if c:
                basis[j] = [a - c * b for a, b in zip(basis[j], basis[k])]
                for col in range(n):
                    A[j][col] -= c * A[k][col]
                for row in range(n):
                    A[row][j] -= c * A[row][k]
        d.append(piv)
    P = tuple(tuple(basis[j][i] for j in range(n)) for i in range(n))
    return P, d
