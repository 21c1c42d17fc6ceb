"""Even integral lattices given by Gram matrices."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

from . import linalg
from .errors import (
    Degenerate,
    DimensionMismatch,
    NoSplitting,
    NotAnIsometry,
    NotSymmetric,
    OddDiagonal,
    ZeroTwist,
)
from .linalg import Matrix, Vec


@dataclass(frozen=True)
class Splitting:
    """Designated hyperbolic block: indices of ``e``, ``f`` and the complement.

    The Gram matrix restricted to (e, f) is ``sign * [[0, 1], [1, 0]]`` and
    both vectors are orthogonal to every sigma index.  ``sign = -1`` records a
    U(-1) block (Mukai convention); the Eichler/Huybrechts formulas need +1.
    """

    e: int
    f: int
    sigma: tuple[int, ...]
    sign: int = 1

    def validate(self, gram: Matrix) -> None:
        n = len(gram)
        idx = sorted((self.e, self.f) + tuple(self.sigma))
        if idx != list(range(n)):
            raise NoSplitting("splitting indices must partition the basis")
        if self.sign not in (1, -1):
            raise NoSplitting("splitting sign must be +1 or -1")
        e, f = self.e, self.f
        if gram[e][e] != 0 or gram[f][f] != 0 or gram[e][f] != self.sign:
            raise NoSplitting("(e, f) block is not a hyperbolic plane")
        for s in self.sigma:
            if gram[e][s] or gram[f][s]:
                raise NoSplitting("hyperbolic block is not orthogonal to sigma")

    def twisted(self) -> "Splitting":
        return Splitting(self.e, self.f, self.sigma, -self.sign)


@dataclass(frozen=True)
class Lattice:
    gram: Matrix
    label: Optional[str] = field(default=None, compare=False)
    splitting: Optional[Splitting] = None

    def __post_init__(self):
        object.__setattr__(self, "gram", linalg.as_matrix(self.gram))
        if self.splitting is not None:
            self.splitting.validate(self.gram)

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def det(self) -> int:
        return linalg.det(self.gram)

    def __repr__(self) -> str:
        name = self.label or "Lattice"
        return f"<{name} rank={self.rank} det={self.det}>"

    def require_splitting(self) -> Splitting:
        if self.splitting is None or self.splitting.sign != 1:
            raise NoSplitting(f"{self!r} carries no designated U-splitting")
        return self.splitting

    def basis_vector(self, i: int) -> Vec:
        return tuple(int(i == j) for j in range(self.rank))

    def sigma_lattice(self) -> "Lattice":
        sp = self.require_splitting()
        g = [[self.gram[i][j] for j in sp.sigma] for i in sp.sigma]
        return Lattice(g, label=f"sigma({self.label})" if self.label else None)

    def embed_sigma(self, z: Sequence[int]) -> Vec:
        """Coordinates in L of a vector given in sigma-block coordinates."""
        sp = self.require_splitting()
        out = [0] * self.rank
        for i, c in zip(sp.sigma, z):
            out[i] = c
        return tuple(out)

    def sigma_part(self, x: Sequence[int]) -> Vec:
        sp = self.require_splitting()
        return tuple(x[i] for i in sp.sigma)

    def in_sigma(self, x: Sequence[int]) -> bool:
        sp = self.require_splitting()
        return x[sp.e] == 0 and x[sp.f] == 0


def make_lattice(gram: Iterable[Iterable[int]], label: str | None = None,
                 splitting: Splitting | None = None) -> Lattice:
    """Validate a Gram matrix and wrap it as an even nondegenerate lattice."""
    G = linalg.as_matrix(gram)
    n = len(G)
    if n == 0 or any(len(r) != n for r in G):
        raise DimensionMismatch("Gram matrix must be square and nonempty")
    for row in G:
        for x in row:
            if not isinstance(x, int) or isinstance(x, bool):
                raise DimensionMismatch(f"Gram entries must be integers, got {x!r}")
    for i in range(n):
        for j in range(i + 1, n):
            if G[i][j] != G[j][i]:
                raise NotSymmetric(f"entry ({i},{j}) = {G[i][j]} but ({j},{i}) = {G[j][i]}")
    for i in range(n):
        if G[i][i] % 2:
            raise OddDiagonal(f"diagonal entry {i} is {G[i][i]}")
    if linalg.det(G) == 0:
        raise Degenerate("Gram matrix has zero determinant")
    return Lattice(G, label=label, splitting=splitting)


def _check_dim(L: Lattice, *vecs) -> None:
    for v in vecs:
        if len(v) != L.rank:
            raise DimensionMismatch(f"vector of length {len(v)} used with rank {L.rank}")


def bilinear(L: Lattice, x: Sequence, y: Sequence):
    _check_dim(L, x, y)
    G = L.gram
    return sum(xi * G[i][j] * yj for i, xi in enumerate(x) if xi
               for j, yj in enumerate(y) if yj)


def q(L: Lattice, x: Sequence):
    """Half the self-pairing; an integer on even lattices."""
    b = bilinear(L, x, x)
    if isinstance(b, int):
        return b // 2
    return Fraction(b) / 2


def gram_vector(L: Lattice, x: Sequence) -> tuple:
    """The row ``x^T G`` so that bilinear(x, y) = dot(gram_vector(x), y)."""
    _check_dim(L, x)
    return linalg.mat_vec(L.gram, x)


def signature(L: Lattice) -> tuple[int, int]:
    """(positive, negative) inertia by exact rational diagonalization."""
    _, d = linalg.symmetric_diagonalize(L.gram)
    p = sum(1 for x in d if x > 0)
    return p, len(d) - p


def direct_sum(L1: Lattice, L2: Lattice, label: str | None = None) -> Lattice:
    """Orthogonal sum; a splitting on L1 (or else on L2) is carried over."""
    G = linalg.block_diag(L1.gram, L2.gram)
    sp = None
    n1 = L1.rank
    if L1.splitting is not None:
        s = L1.splitting
        sp = Splitting(s.e, s.f, s.sigma + tuple(range(n1, n1 + L2.rank)), s.sign)
    elif L2.splitting is not None:
        s = L2.splitting
        sp = Splitting(s.e + n1, s.f + n1, tuple(range(n1)) + tuple(i + n1 for i in s.sigma), s.sign)
    return Lattice(G, label=label, splitting=sp)


def twist(L: Lattice, n: int, label: str | None = None) -> Lattice:
    if n == 0:
        raise ZeroTwist("twist by zero")
    sp = L.splitting
    if sp is not None and n != -1 and n != 1:
        sp = None
    elif sp is not None and n == -1:
        sp = sp.twisted()
    return Lattice(linalg.mat_scale(n, L.gram), label=label, splitting=sp)


# -- standard constructors ----------------------------------------------------

E8_GRAM = (
    (2, -1, 0, 0, 0, 0, 0, 0),
    (-1, 2, -1, 0, 0, 0, 0, 0),
    (0, -1, 2, -1, 0, 0, 0, -1),
    (0, 0, -1, 2, -1, 0, 0, 0),
    (0, 0, 0, -1, 2, -1, 0, 0),
    (0, 0, 0, 0, -1, 2, -1, 0),
    (0, 0, 0, 0, 0, -1, 2, 0),
    (0, 0, -1, 0, 0, 0, 0, 2),
)


def hyperbolic_plane() -> Lattice:
    return Lattice(((0, 1), (1, 0)), label="U", splitting=Splitting(0, 1, ()))


def rank_one(m: int) -> Lattice:
    """The rank-one lattice <m> (m even, nonzero)."""
    return make_lattice([[m]], label=f"<{m}>")


def e8(scale: int = 1) -> Lattice:
    """E8 twisted by ``scale``; ``e8(-2)`` is E8(-2)."""
    return Lattice(linalg.mat_scale(scale, E8_GRAM), label=f"E8({scale})")


def split_lattice(sigma: Lattice | Sequence[Sequence[int]], label: str | None = None) -> Lattice:
    """U + sigma with the hyperbolic block designated as the splitting."""
    S = sigma if isinstance(sigma, Lattice) else make_lattice(sigma)
    G = linalg.block_diag(((0, 1), (1, 0)), S.gram)
    return make_lattice(G, label=label, splitting=Splitting(0, 1, tuple(range(2, 2 + S.rank))))


def lattice_L(n: int) -> Lattice:
    """U + <-2n> with basis (e, f, L)."""
    if n <= 0:
        raise ValueError("n must be positive")
    return split_lattice([[-2 * n]], label=f"L_{n}")


# -- discriminant group ---------------------------------------------------------

@dataclass(frozen=True)
class DiscriminantGroup:
    """Invariant factors d_1 | d_2 | ... (all > 1) and lifts generating L*/L.

    ``lift_basis[i]`` is a rational vector (in lattice coordinates) of
    order ``invariant_factors[i]`` modulo L.
    """

    invariant_factors: tuple[int, ...]
    lift_basis: tuple[tuple[Fraction, ...], ...]
    # rows of D*V^-1 restricted to the nontrivial factors: coordinate map
    _coord_rows: tuple[tuple[int, ...], ...] = field(repr=False, default=())

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def coordinates(self, x: Sequence) -> tuple[int, ...]:
        """Coordinates of a dual vector x with respect to the lift basis (reduced)."""
        out = []
        for row, d in zip(self._coord_rows, self.invariant_factors):
            c = sum(Fraction(a) * b for a, b in zip(row, x))
            if c.denominator != 1:
                raise ValueError("vector is not in the dual lattice")
            out.append(int(c) % d)
        return tuple(out)


def discriminant_group(L: Lattice) -> DiscriminantGroup:
    # G = U^-1 D V^-1, so L* = G^-1 Z^n = V D^-1 Z^n
    diag, U, V = linalg.smith_normal_form(L.gram)
    n = L.rank
    Vinv = linalg.integer_inverse(V)
    factors, lifts, rows = [], [], []
    for i, d in enumerate(diag):
        if d == 1:
            continue
        factors.append(d)
        lifts.append(tuple(Fraction(V[k][i], d) for k in range(n)))
        rows.append(tuple(d * x for x in Vinv[i]))
    return DiscriminantGroup(tuple(factors), tuple(lifts), tuple(rows))


def _matrix_of(g) -> Matrix:
    return getattr(g, "matrix", g)


def _check_isometry(L: Lattice, M: Matrix) -> None:
    if len(M) != L.rank or any(len(r) != L.rank for r in M):
        raise DimensionMismatch("matrix size does not match lattice rank")
    if linalg.mat_mul(linalg.mat_mul(linalg.transpose(M), L.gram), M) != L.gram:
        raise NotAnIsometry("M^T G M != G")


def disc_action(L: Lattice, g, A: DiscriminantGroup | None = None) -> Matrix:
    """Matrix of the induced map on L*/L; column i is the image of generator i."""
    M = _matrix_of(g)
    _check_isometry(L, M)
    A = A or discriminant_group(L)
    cols = [A.coordinates(linalg.mat_vec(M, x)) for x in A.lift_basis]
    k = len(cols)
    return tuple(tuple(cols[j][i] for j in range(k)) for i in range(k))


def is_stable(L: Lattice, g) -> bool:
    A = discriminant_group(L)
    act = disc_action(L, g, A)
    return all(act[i][j] == int(i == j) for i in range(len(act)) for j in range(len(act)))


def is_pm_on_disc(L: Lattice, g) -> int:
    """+1 if g acts trivially on L*/L, -1 if it acts as -1, else 0 ("neither")."""
    A = discriminant_group(L)
    act = disc_action(L, g, A)
    k = len(act)
    d = A.invariant_factors
    if all(act[i][j] == int(i == j) for i in range(k) for j in range(k)):
        return 1
    if all(act[i][j] == (-int(i == j)) % d[i] for i in range(k) for j in range(k)):
        return -1
    return 0


def is_stable_at(L: Lattice, g, p: int) -> bool:
    """Trivial action on the p-primary part of the discriminant group."""
    A = discriminant_group(L)
    act = disc_action(L, g, A)
    d = A.invariant_factors
    for j, dj in enumerate(d):
        pj = 1
        while dj % (pj * p) == 0:
            pj *= p
        if pj == 1:
            continue
        scale = dj // pj
        # image of scale*gamma_j minus scale*gamma_j must vanish
        for i, di in enumerate(d):
            if (scale * (act[i][j] - int(i == j))) % di:
                return False
    return True
