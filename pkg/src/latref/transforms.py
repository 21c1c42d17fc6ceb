"""Isometries of even lattices and the generator zoo acting on them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Optional, Sequence

from sympy import Matrix as SymMatrix
from sympy import Poly, cyclotomic_poly, factor_list, factorint, symbols, totient

from . import kernels, linalg
from .errors import (
    BadConjugator,
    DimensionMismatch,
    IsotropicVector,
    LatticeMismatch,
    NotAnIsometry,
    NotIntegral,
    VectorNotInSigma,
)
from .lattice import Lattice, bilinear, gram_vector, q, twist
from .linalg import Matrix, Vec
from .squares import SquareClass


@dataclass(frozen=True)
class Isometry:
    """Integer matrix whose columns are the images of the basis vectors."""

    lattice: Lattice
    matrix: Matrix

    def __matmul__(self, other: "Isometry") -> "Isometry":
        return compose(self, other)

    def __call__(self, x: Sequence[int]) -> Vec:
        return apply(self, x)

    @property
    def det(self) -> int:
        return linalg.det(self.matrix)

    @property
    def is_identity(self) -> bool:
        return self.matrix == linalg.identity(self.lattice.rank)

    def column(self, i: int) -> Vec:
        return tuple(row[i] for row in self.matrix)


def make_isometry(L: Lattice, M: Sequence[Sequence[int]]) -> Isometry:
    M = linalg.as_matrix(M)
    n = L.rank
    if len(M) != n or any(len(r) != n for r in M):
        raise DimensionMismatch(f"expected a {n}x{n} matrix")
    if linalg.mat_mul(linalg.mat_mul(linalg.transpose(M), L.gram), M) != L.gram:
        raise NotAnIsometry("matrix does not preserve the Gram form")
    if linalg.det(M) not in (1, -1):
        raise NotAnIsometry("determinant is not +-1")
    return Isometry(L, M)


def identity(L: Lattice) -> Isometry:
    return Isometry(L, linalg.identity(L.rank))


def negation(L: Lattice) -> Isometry:
    return Isometry(L, linalg.mat_scale(-1, linalg.identity(L.rank)))


def _same(g: Isometry, h: Isometry) -> None:
    if g.lattice.gram != h.lattice.gram:
        raise LatticeMismatch("isometries live on different lattices")


def compose(g: Isometry, h: Isometry) -> Isometry:
    """g after h."""
    _same(g, h)
    return Isometry(g.lattice, linalg.mat_mul(g.matrix, h.matrix))


def inverse(g: Isometry) -> Isometry:
    # M^-1 = G^-1 M^T G, computed exactly
    return Isometry(g.lattice, linalg.integer_inverse(g.matrix))


def apply(g: Isometry, x: Sequence[int]) -> Vec:
    if len(x) != g.lattice.rank:
        raise DimensionMismatch("vector length does not match lattice rank")
    return linalg.mat_vec(g.matrix, x)


def power(g: Isometry, k: int) -> Isometry:
    if k < 0:
        return power(inverse(g), -k)
    return Isometry(g.lattice, linalg.mat_pow(g.matrix, k))


# -- generators -------------------------------------------------------------------

def reflection(L: Lattice, v: Sequence[int]) -> Isometry:
    """s_v(x) = x - (x, v) q(v)^-1 v."""
    v = tuple(v)
    if len(v) != L.rank:
        raise DimensionMismatch("vector length does not match lattice rank")
    qv = q(L, v)
    if qv == 0:
        raise IsotropicVector(f"q({list(v)}) = 0")
    gv = gram_vector(L, v)
    if any(c % qv for c in gv):
        raise NotIntegral(f"q(v) = {qv} does not divide every (v, x)")
    n = L.rank
    cols = []
    for j in range(n):
        c = gv[j] // qv
        cols.append([int(i == j) - c * v[i] for i in range(n)])
    return Isometry(L, linalg.transpose(cols))


def _sigma_vector(L: Lattice, b: Sequence[int]) -> Vec:
    sp = L.require_splitting()
    b = tuple(b)
    if len(b) == len(sp.sigma) and len(b) != L.rank:
        return L.embed_sigma(b)
    if len(b) != L.rank:
        raise DimensionMismatch("vector length matches neither the lattice nor sigma")
    if b[sp.e] or b[sp.f]:
        raise VectorNotInSigma(f"{list(b)} has a nonzero U-component")
    return b


def _from_columns(L: Lattice, cols: dict[int, Sequence[int]]) -> Isometry:
    n = L.rank
    return Isometry(L, tuple(tuple(cols[j][i] for j in range(n)) for i in range(n)))


def eichler(L: Lattice, b: Sequence[int]) -> Isometry:
    """E_b(re + sf + z) = (-(b, z) + r - q(b) s) e + s f + z + s b."""
    sp = L.require_splitting()
    b = _sigma_vector(L, b)
    e, f = L.basis_vector(sp.e), L.basis_vector(sp.f)
    qb = q(L, b)
    gb = gram_vector(L, b)
    cols = {sp.e: e, sp.f: tuple(-qb * x + y + z for x, y, z in zip(e, f, b))}
    for i in sp.sigma:
        cols[i] = tuple(-gb[i] * x + int(k == i) for k, x in enumerate(e))
    return _from_columns(L, cols)


def huybrechts(L: Lattice, b: Sequence[int], conj: Optional[Sequence[int]] = None) -> Isometry:
    """psi_b(re + sf + z) = ((b, z) - r + q(b) s) e - s f + z + s b, optionally conjugated by s_a."""
    sp = L.require_splitting()
    b = _sigma_vector(L, b)
    e, f = L.basis_vector(sp.e), L.basis_vector(sp.f)
    qb = q(L, b)
    gb = gram_vector(L, b)
    cols = {sp.e: tuple(-x for x in e), sp.f: tuple(qb * x - y + z for x, y, z in zip(e, f, b))}
    for i in sp.sigma:
        cols[i] = tuple(gb[i] * x + int(k == i) for k, x in enumerate(e))
    psi = _from_columns(L, cols)
    if conj is None:
        return psi
    a = tuple(conj)
    if len(a) != L.rank or q(L, a) not in (1, -1):
        raise BadConjugator("conjugating vector must satisfy q(a) = +-1")
    s = reflection(L, a)
    return compose(s, compose(psi, s))


# -- Cartan-Dieudonne and spinor norms ---------------------------------------------

def _rational_reflect(d: Sequence[Fraction], w: Sequence[Fraction], x: Sequence[Fraction]):
    # reflection in a diagonal basis with bilinear form sum d_i x_i y_i
    ww = sum(di * wi * wi for di, wi in zip(d, w))
    xw = sum(di * xi * wi for di, xi, wi in zip(d, x, w))
    c = 2 * xw / ww
    return [xi - c * wi for xi, wi in zip(x, w)]


def cartan_dieudonne(g: Isometry, order: Optional[Sequence[int]] = None) -> list[tuple[Fraction, ...]]:
    """Rational vectors b_1..b_m with g = s_{b_1} o ... o s_{b_m} and m <= 2 rank.

    Runs on an exactly diagonalized basis; ``order`` permutes the starting
    basis and so changes the pivots (and the decomposition).
    """
    L = g.lattice
    n = L.rank
    P, d = linalg.symmetric_diagonalize(L.gram, order)
    Pinv = linalg.rational_inverse(P)
    # tau as a list of column images in the diagonal basis
    T = linalg.mat_mul(Pinv, linalg.mat_mul(g.matrix, P))
    cols = [[T[i][j] for i in range(n)] for j in range(n)]
    found = []

    def left_mult(w):
        for j in range(n):
            cols[j] = _rational_reflect(d, w, cols[j])
        found.append(w)

    for i in range(n):
        x = [Fraction(int(k == i)) for k in range(n)]
        y = cols[i]
        if y == x:
            continue
        w = [a - b for a, b in zip(y, x)]
        if sum(di * wi * wi for di, wi in zip(d, w)) != 0:
            left_mult(w)
        else:
            left_mult([a + b for a, b in zip(y, x)])
            left_mult(x)
    # g = R_1 o ... o R_k with reflections in the order they were applied
    return [tuple(sum(P[r][c] * w[c] for c in range(n)) for r in range(n)) for w in found]


def reflection_product(L: Lattice, vectors: Sequence[Sequence]) -> tuple[tuple[Fraction, ...], ...]:
    """Exact rational matrix of s_{v_1} o ... o s_{v_m}."""
    n = L.rank
    M = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for v in reversed(list(vectors)):
        v = [Fraction(c) for c in v]
        gv = gram_vector(L, v)
        qv = sum(a * b for a, b in zip(gv, v)) / 2
        # M <- s_v M
        for j in range(n):
            col = [M[i][j] for i in range(n)]
            c = sum(a * b for a, b in zip(gv, col)) / qv
            for i in range(n):
                M[i][j] = col[i] - c * v[i]
    return tuple(tuple(r) for r in M)


@lru_cache(maxsize=256)
def _hint_primes(gram: Matrix) -> tuple[int, ...]:
    return tuple(sorted(set(factorint(abs(2 * linalg.det(gram))))))


def spinor_norm(g: Isometry, order: Optional[Sequence[int]] = None) -> SquareClass:
    """Product of q(b_i) over a Cartan-Dieudonne decomposition, as a square class."""
    L = g.lattice
    prod = Fraction(1)
    for b in cartan_dieudonne(g, order):
        prod *= q(L, b)
    return SquareClass.of(prod, _hint_primes(L.gram))


def spinor_norm_twisted(g: Isometry, order: Optional[Sequence[int]] = None) -> SquareClass:
    """Spinor norm computed on L(-1)."""
    Lm = twist(g.lattice, -1)
    return spinor_norm(Isometry(Lm, g.matrix), order)


def is_O_plus(g: Isometry) -> bool:
    """Orientation-preserving, via the real sign of the spinor norm on L(-1)."""
    return spinor_norm_twisted(g).sign > 0


# -- involution recognition -------------------------------------------------------

@dataclass(frozen=True)
class InvolutionType:
    kind: str  # "type1" | "type2" | "no" | "unknown"
    vector: Optional[Vec] = None

    def __bool__(self) -> bool:
        return self.kind in ("type1", "type2")


def minus_eigenlattice(g: Isometry) -> list[Vec]:
    n = g.lattice.rank
    A = linalg.mat_add(g.matrix, linalg.identity(n))
    return linalg.integer_kernel(A, n)


def orthogonal_complement(L: Lattice, v: Sequence[int]) -> list[Vec]:
    return linalg.integer_kernel((gram_vector(L, v),), L.rank)


def _in_span(w: Sequence[int], v: Sequence[int]) -> bool:
    i = next((k for k, c in enumerate(v) if c), None)
    if i is None:
        return not any(w)
    if w[i] % v[i]:
        return False
    t = w[i] // v[i]
    return all(a == t * b for a, b in zip(w, v))


def acts_trivially_mod(g: Isometry, v: Sequence[int]) -> bool:
    """True iff g is the identity on v^perp / Z v."""
    L = g.lattice
    for u in orthogonal_complement(L, v):
        w = tuple(a - b for a, b in zip(apply(g, u), u))
        if not _in_span(w, v):
            return False
    return True


def _witness_key(v: Vec):
    return (sum(abs(c) for c in v), tuple(-c for c in v))


def _binary_isotropic(A: int, B: int, C: int) -> list[tuple[int, int]]:
    """Primitive (x, y) up to sign with A x^2 + B x y + C y^2 = 0."""
    from math import isqrt
    out = []
    if A == 0:
        out.append((1, 0))
    if C == 0:
        out.append((0, 1))
    if A != 0:
        D = B * B - 4 * A * C
        if D >= 0 and isqrt(D) ** 2 == D:
            s = isqrt(D)
            for r in {-B + s, -B - s}:
                out.append(linalg.primitive((r, 2 * A)))
    return list(dict.fromkeys(linalg.primitive(v) for v in out))


def is_reflexive_involution(g: Isometry, search_bound: int = 50) -> InvolutionType:
    L = g.lattice
    n = L.rank
    if linalg.mat_mul(g.matrix, g.matrix) != linalg.identity(n) or g.is_identity:
        return InvolutionType("no")
    E = minus_eigenlattice(g)
    k = len(E)
    if k == 1:
        v = linalg.primitive(E[0])
        qv = q(L, v)
        if qv in (1, -1):
            return InvolutionType("type1", v)
        if qv == 0 and acts_trivially_mod(g, v):
            return InvolutionType("type2", v)
        return InvolutionType("no")

    def combine(c):
        return linalg.primitive(tuple(sum(ci * E[i][r] for i, ci in enumerate(c)) for r in range(n)))

    if k == 2:
        A, C = q(L, E[0]), q(L, E[1])
        B = bilinear(L, E[0], E[1])
        cands = sorted((combine(c) for c in _binary_isotropic(A, B, C)), key=_witness_key)
        for v in cands:
            if acts_trivially_mod(g, v):
                return InvolutionType("type2", v)
        return InvolutionType("no")
    # rank >= 3: bounded search for isotropic vectors in the eigenlattice
    EG = linalg.mat_mul(linalg.mat_mul(E, L.gram), linalg.transpose(E))
    coeffs = kernels.box_vectors(EG, 0, search_bound)
    cands = sorted({combine(c) for c in coeffs if linalg.content(c) == 1}, key=_witness_key)
    for v in cands:
        if acts_trivially_mod(g, v):
            return InvolutionType("type2", v)
    return InvolutionType("unknown")


# -- order ------------------------------------------------------------------

@dataclass(frozen=True)
class OrderResult:
    kind: str  # "finite" | "infinite" | "exceeds_cap"
    n: Optional[int] = None


_X = symbols("x")


def _cyclotomic_index(P: Poly) -> int:
    deg = P.degree()
    k = 1
    while True:
        if totient(k) == deg and Poly(cyclotomic_poly(k, _X), _X) == P:
            return k
        k += 1
        if k > 64 * (deg + 1) ** 2:
            raise ArithmeticError("cyclotomic index not found")


def _poly_at_matrix(coeffs: Sequence[int], M: Matrix) -> Matrix:
    n = len(M)
    R = linalg.zeros(n, n)
    I = linalg.identity(n)
    for c in coeffs:  # Horner, leading coefficient first
        R = linalg.mat_add(linalg.mat_mul(R, M), linalg.mat_scale(c, I))
    return R


def order(g: Isometry, cap: int = 1000) -> OrderResult:
    """Exact order: finite orders are bounded via the cyclotomic factorization."""
    M = g.matrix
    n = len(M)
    if g.is_identity:
        return OrderResult("finite", 1)
    cp = SymMatrix(M).charpoly(_X)
    _, factors = factor_list(cp.as_expr(), _X)
    polys = [Poly(f, _X) for f, _ in factors]
    if any(not P.is_cyclotomic for P in polys):
        return OrderResult("infinite")
    radical = Poly(1, _X)
    for P in polys:
        radical = radical * P
    if _poly_at_matrix([int(c) for c in radical.all_coeffs()], M) != linalg.zeros(n, n):
        return OrderResult("infinite")  # unipotent part
    m = 1
    for P in polys:
        m = lcm(m, _cyclotomic_index(P))
    if m > cap:
        return OrderResult("exceeds_cap", m)
    return OrderResult("finite", m)
