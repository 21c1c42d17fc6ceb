import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import factorint

from latref.errors import ZeroInput
from latref.squares import SquareClass, hilbert, legendre, square_class_p, squarefree_part

PRIMES = [2, 3, 5, 7, 11, 13]
nonzero = st.integers(min_value=-400, max_value=400).filter(bool)


def _sympy_squarefree(n):
    out = -1 if n < 0 else 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            out *= p
    return out


def _solvable_mod(a, b, p, k):
    """Primitive solution of a x^2 + b y^2 = z^2 modulo p^k (local solubility oracle)."""
    m = p ** k
    for x, y, z in itertools.product(range(m), repeat=3):
        if (x % p or y % p or z % p) and (a * x * x + b * y * y - z * z) % m == 0:
            return True
    return False


def test_square_is_trivial():
    for p in PRIMES:
        assert square_class_p(9, p).is_trivial


def test_two_is_nonresidue_at_five():
    c = square_class_p(2, 5)
    assert c.valuation == 0 and c.unit == "u"
    assert {x * x % 5 for x in range(5)} == {0, 1, 4}


def test_seven_at_two():
    c = square_class_p(7, 2)
    assert c.valuation == 0 and c.unit == -1


def test_zero_rejected():
    with pytest.raises(ZeroInput):
        square_class_p(0, 3)
    with pytest.raises(ZeroInput):
        hilbert(0, 1, 2)
    with pytest.raises(ZeroInput):
        SquareClass.of(0)


def test_hilbert_examples():
    for p in PRIMES + ["real"]:
        for b in (-7, -1, 2, 3, 10):
            assert hilbert(1, b, p) == 1
    assert hilbert(-1, -1, 2) == -1
    assert hilbert(-1, -1, "real") == -1
    assert not _solvable_mod(-1, -1, 2, 3)


@pytest.mark.parametrize("p", [3, 5])
def test_hilbert_against_local_solubility(p):
    # units and p-multiples up to squares; solubility mod p^2 (p odd) decides
    reps = [1, 2, p, 2 * p]
    for a in reps + [-r for r in reps]:
        for b in reps + [-r for r in reps]:
            expected = 1 if _solvable_mod(a, b, p, 2) else -1
            assert hilbert(a, b, p) == expected, (a, b, p)


def test_hilbert_two_adic_against_mod_16():
    reps = [1, 3, 5, 7, 2, 6, 10, 14]
    reps = reps + [-r for r in reps]
    for a in reps:
        for b in reps:
            expected = 1 if _solvable_mod(a, b, 2, 4) else -1
            assert hilbert(a, b, 2) == expected, (a, b)


@settings(max_examples=80, deadline=None)
@given(nonzero, nonzero)
def test_hilbert_product_formula(a, b):
    primes = set(factorint(abs(2 * a * b)))
    prod = hilbert(a, b, "real")
    for p in primes:
        prod *= hilbert(a, b, p)
    assert prod == 1


@settings(max_examples=80, deadline=None)
@given(nonzero, nonzero, nonzero, st.sampled_from(PRIMES))
def test_hilbert_symmetric_and_bimultiplicative(a, b, c, p):
    assert hilbert(a, b, p) == hilbert(b, a, p)
    assert hilbert(a, b * c, p) == hilbert(a, b, p) * hilbert(a, c, p)
    assert hilbert(a, -a, p) == 1


@settings(max_examples=100, deadline=None)
@given(nonzero, st.integers(min_value=1, max_value=50))
def test_squarefree_part_against_sympy(n, d):
    x = Fraction(n, d)
    assert squarefree_part(x) == _sympy_squarefree(n * d)
    assert squarefree_part(x, hint_primes=[2, 3, 5]) == squarefree_part(x)


@settings(max_examples=100, deadline=None)
@given(nonzero, nonzero, st.sampled_from(PRIMES))
def test_local_class_multiplicative(a, b, p):
    assert square_class_p(a * b, p) == square_class_p(a, p) * square_class_p(b, p)
    assert (SquareClass.of(a) * SquareClass.of(b)) == SquareClass.of(a * b)


def test_legendre_brute_force():
    for p in (3, 5, 7, 11, 13):
        squares = {x * x % p for x in range(1, p)}
        for a in range(1, p):
            assert legendre(a, p) == (1 if a in squares else -1)
