"""Square classes of Q^x and Q_p^x."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable

from sympy import factorint

from .errors import ZeroInput


def _is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def squarefree_part(x, hint_primes: Iterable[int] = ()) -> int:
    """Signed squarefree integer in the square class of the nonzero rational x.

    ``hint_primes`` are trial-divided first; if the cofactor is then a
    perfect square no factorization is needed.
    """
    x = Fraction(x)
    if x == 0:
        raise ZeroInput("zero has no square class")
    sign = -1 if x < 0 else 1
    n = abs(x.numerator) * x.denominator  # same class as |x|
    out = 1
    for p in sorted(set(hint_primes)):
        if p < 2:
            continue
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e & 1:
            out *= p
    if not _is_square(n):
        for p, e in factorint(n).items():
            if e & 1:
                out *= p
    return sign * out


@dataclass(frozen=True)
class SquareClass:
    """Element of Q^x / (Q^x)^2, stored as its signed squarefree representative."""

    value: int

    def __post_init__(self):
        if self.value == 0:
            raise ZeroInput("zero square class")

    @classmethod
    def of(cls, x, hint_primes: Iterable[int] = ()) -> "SquareClass":
        return cls(squarefree_part(x, hint_primes))

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        a, b = self.value, other.value
        from math import gcd
        g = gcd(a, b)
        return SquareClass((a // g) * (b // g))

    @property
    def is_trivial(self) -> bool:
        return self.value == 1

    @property
    def sign(self) -> int:
        return 1 if self.value > 0 else -1

    def local(self, p: int) -> "LocalSquareClass":
        return square_class_p(self.value, p)

    def __repr__(self) -> str:
        return f"SquareClass({self.value})"


@dataclass(frozen=True)
class LocalSquareClass:
    """Element of Q_p^x / (Q_p^x)^2 as (valuation parity, unit class).

    For odd p the unit tag is 1 or "u" (nonresidue); for p = 2 it is one of
    1, -1, 5, -5 (residues 1, 7, 5, 3 mod 8).
    """

    p: int
    valuation: int
    unit: object

    @property
    def is_trivial(self) -> bool:
        return self.valuation == 0 and self.unit == 1

    def __mul__(self, other: "LocalSquareClass") -> "LocalSquareClass":
        if self.p != other.p:
            raise ValueError("square classes at different primes")
        v = (self.valuation + other.valuation) % 2
        if self.p == 2:
            u = _TWO_ADIC_TAG[(_TWO_ADIC_RES[self.unit] * _TWO_ADIC_RES[other.unit]) % 8]
        else:
            u = 1 if (self.unit == 1) == (other.unit == 1) else "u"
        return LocalSquareClass(self.p, v, u)


_TWO_ADIC_TAG = {1: 1, 7: -1, 5: 5, 3: -5}
_TWO_ADIC_RES = {1: 1, -1: 7, 5: 5, -5: 3}


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _split(x: Fraction, p: int) -> tuple[int, int]:
    """(valuation, integer unit part) with x = p^v * u and u a p-adic unit."""
    num, den = x.numerator, x.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    # u = num/den; num*den has the same square class and is an integer unit
    return v, num * den


def square_class_p(x, p: int) -> LocalSquareClass:
    x = Fraction(x)
    if x == 0:
        raise ZeroInput("zero has no square class")
    v, u = _split(x, p)
    if p == 2:
        return LocalSquareClass(2, v % 2, _TWO_ADIC_TAG[u % 8])
    return LocalSquareClass(p, v % 2, 1 if legendre(u, p) == 1 else "u")


def hilbert(a, b, p) -> int:
    """Hilbert symbol (a, b)_p; ``p`` is a prime or the string "real"."""
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ZeroInput("Hilbert symbol of zero")
    if p in ("real", "inf", float("inf")):
        return -1 if a < 0 and b < 0 else 1
    alpha, u = _split(a, p)
    beta, w = _split(b, p)
    if p == 2:
        eps = lambda t: ((t - 1) // 2) % 2
        omega = lambda t: ((t * t - 1) // 8) % 2
        e = (eps(u) * eps(w) + alpha * omega(w) + beta * omega(u)) % 2
        return -1 if e else 1
    s = 1
    if (alpha * beta * ((p - 1) // 2)) % 2:
        s = -s
    if beta % 2:
        s *= legendre(u, p)
    if alpha % 2:
        s *= legendre(w, p)
    return s
