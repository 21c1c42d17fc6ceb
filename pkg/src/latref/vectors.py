"""Bounded enumeration of vectors with q = +-1."""

from __future__ import annotations

from functools import lru_cache
from math import gcd

from . import kernels
from .lattice import Lattice, signature
from .linalg import Vec


def _canonical(v: tuple[int, ...]) -> tuple[int, ...]:
    first = next((c for c in v if c), 0)
    return v if first > 0 else tuple(-c for c in v)


@lru_cache(maxsize=64)
def _short_vectors_cached(gram, splitting, target_q: int, box: int) -> tuple[Vec, ...]:
    n = len(gram)
    if splitting is not None and splitting.sign == 1:
        sp = splitting
        sigma_gram = [[gram[i][j] for j in sp.sigma] for i in sp.sigma]
        found = set()
        for t in kernels.split_vectors(sigma_gram, target_q, box):
            v = [0] * n
            v[sp.e], v[sp.f] = t[0], t[1]
            for i, c in zip(sp.sigma, t[2:]):
                v[i] = c
            found.add(_canonical(tuple(v)))
        return tuple(sorted(found))
    # q = +-1 vectors are automatically primitive
    return tuple(kernels.box_vectors(gram, 2 * target_q, box))


def _represents_unit(L: Lattice, target_q: int) -> bool:
    """False when q = target_q is impossible on the whole lattice."""
    n = L.rank
    g = 0
    for i in range(n):
        g = gcd(g, L.gram[i][i] // 2)
        for j in range(i + 1, n):
            g = gcd(g, L.gram[i][j])
    if g != 1:
        return False
    pos, neg = signature(L)
    return (pos if target_q > 0 else neg) > 0


def short_vectors(L: Lattice, target_q: int, box: int) -> tuple[Vec, ...]:
    """Vectors with q(v) = target_q and coordinates in [-box, box].

    One representative per sign pair (first nonzero coordinate positive), in
    lexicographic order.  On a split lattice the enumeration runs over the
    sigma block and solves for the hyperbolic coordinates.
    """
    if box < 1:
        raise ValueError("box must be at least 1")
    if target_q not in (1, -1):
        raise ValueError("target_q must be +1 or -1")
    if not _represents_unit(L, target_q):
        return ()
    return _short_vectors_cached(L.gram, L.splitting, target_q, box)


def reflection_vectors(L: Lattice, box: int) -> tuple[Vec, ...]:
    """All +-2 vectors in the box, merged in lexicographic order."""
    return tuple(sorted(short_vectors(L, 1, box) + short_vectors(L, -1, box)))
