import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix as SymMatrix
from sympy import Rational

from conftest import random_even_gram, random_split_lattice
from latref import linalg
from latref.errors import (
    BadConjugator,
    DimensionMismatch,
    IsotropicVector,
    LatticeMismatch,
    NoSplitting,
    NotAnIsometry,
    NotIntegral,
    VectorNotInSigma,
)
from latref.lattice import direct_sum, hyperbolic_plane, lattice_L, make_lattice, q, rank_one
from latref.k3 import PellSolution, pell_isometry
from latref.squares import SquareClass
from latref.transforms import (
    apply,
    cartan_dieudonne,
    compose,
    eichler,
    huybrechts,
    identity,
    inverse,
    is_O_plus,
    is_reflexive_involution,
    make_isometry,
    negation,
    order,
    power,
    reflection,
    reflection_product,
    spinor_norm,
    spinor_norm_twisted,
)
from latref.words import random_word

G2 = ((81, 160, 720), (40, 81, 360), (18, 36, 161))
L10 = lattice_L(10)
SIGMA_GEN = (0, 0, 1)


def zassenhaus_spinor(g):
    """Spinor norm as the determinant of (x, y) -> (x, w_y) on the image of 1 - g, where (1 - g) w_y = y."""
    L = g.lattice
    G = SymMatrix(L.gram)
    A = SymMatrix.eye(L.rank) - SymMatrix(g.matrix)
    im = A.columnspace()
    if not im:
        return SquareClass(1)
    ws = []
    for y in im:
        sol, params = A.gauss_jordan_solve(y)
        ws.append(sol.subs({p: 0 for p in params}))
    # for s_b this gives (b, w_b) = q(b), matching the reflection-norm convention
    beta = SymMatrix(len(im), len(im), lambda i, j: (im[i].T * G * ws[j])[0, 0])
    d = Rational(beta.det())
    d = Fraction(int(d.p), int(d.q))
    return SquareClass.of(d)


# -- construction ---------------------------------------------------------------

def test_g2_is_isometry():
    g = make_isometry(L10, G2)
    assert apply(g, (1, 0, 0)) == (81, 40, 18)
    assert g.det == 1


def test_perturbed_g2_rejected():
    M = [list(r) for r in G2]
    M[0][0] += 1
    with pytest.raises(NotAnIsometry):
        make_isometry(L10, M)


def test_non_invertible_rejected():
    with pytest.raises(NotAnIsometry):
        make_isometry(hyperbolic_plane(), [[0, 0], [0, 0]])
    with pytest.raises(DimensionMismatch):
        make_isometry(hyperbolic_plane(), [[1, 0, 0], [0, 1, 0], [0, 0, 1]])


def test_identity_and_inverse():
    g = make_isometry(L10, G2)
    assert compose(g, inverse(g)).is_identity
    assert inverse(identity(L10)).is_identity
    assert make_isometry(L10, linalg.identity(3)).is_identity


def test_lattice_mismatch():
    with pytest.raises(LatticeMismatch):
        compose(identity(L10), identity(lattice_L(3)))


# -- generators -----------------------------------------------------------------

def test_reduction_reflections():
    s1 = reflection(L10, (13, 7, 3))
    s2 = reflection(L10, (3, 3, 1))
    x = apply(s1, (81, 40, 18))
    assert x == (-10, -9, -3)
    assert apply(s2, x) == (-1, 0, 0)


def test_reflection_errors():
    with pytest.raises(IsotropicVector):
        reflection(hyperbolic_plane(), (1, 0))
    with pytest.raises(NotIntegral):
        reflection(L10, (1, 2, 0))  # q = 2 does not divide (v, f) = 1
    with pytest.raises(DimensionMismatch):
        reflection(L10, (1, 1))


def test_reflection_by_non_unit_but_integral():
    # v = L in <-20> gives an integral reflection even though q(v) = -10
    s = reflection(L10, SIGMA_GEN)
    assert s.matrix == ((1, 0, 0), (0, 1, 0), (0, 0, -1))


def test_eichler_examples():
    assert eichler(L10, (0,)).is_identity
    E = eichler(L10, SIGMA_GEN)
    assert apply(E, (0, 1, 0)) == (10, 1, 1)
    with pytest.raises(VectorNotInSigma):
        eichler(L10, (1, 0, 1))
    with pytest.raises(NoSplitting):
        eichler(make_lattice([[2, 1], [1, -2]]), (1, 0))


def test_eichler_additive():
    L = lattice_L(3)
    for b1 in range(-3, 4):
        for b2 in range(-3, 4):
            lhs = compose(eichler(L, (b1,)), eichler(L, (b2,)))
            assert lhs == eichler(L, (b1 + b2,))


def test_huybrechts_identities():
    for n in (1, 2, 5, 10):
        L = lattice_L(n)
        s_minus = reflection(L, (1, -1, 0))
        s_plus = reflection(L, (1, 1, 0))
        assert huybrechts(L, (0,)) == compose(s_minus, s_plus)
        for b in range(-4, 5):
            psi = huybrechts(L, (b,))
            assert compose(huybrechts(L, (0,)), psi) == eichler(L, (b,))
            assert compose(psi, psi).is_identity and psi.det == 1


def test_huybrechts_odd_q_two_reflections():
    # with q(b) = 2k + 1 the vectors -(k+1)e + 2f + b and -ke + 2f + b have q = -1, +1
    # and their reflections multiply to psi_{-b}
    for m in (1, 3, -1, -5):
        L = direct_sum(hyperbolic_plane(), rank_one(2 * m))
        k = (m - 1) // 2
        v1 = (-(k + 1), 2, 1)
        v2 = (-k, 2, 1)
        assert (q(L, v1), q(L, v2)) == (-1, 1)
        product = compose(reflection(L, v1), reflection(L, v2))
        assert product == huybrechts(L, (0, 0, -1))
        assert product == compose(reflection(L, v2), reflection(L, v1))


def test_huybrechts_conjugated():
    L = lattice_L(2)
    a = (1, 1, 0)
    h = huybrechts(L, (1,), a)
    s = reflection(L, a)
    assert h == compose(s, compose(huybrechts(L, (1,)), s))
    with pytest.raises(BadConjugator):
        huybrechts(L, (1,), (1, 0, 0))


# -- Cartan-Dieudonne and spinor norms -------------------------------------------

def test_cartan_dieudonne_examples():
    assert cartan_dieudonne(identity(L10)) == []
    v = (13, 7, 3)
    seq = cartan_dieudonne(reflection(L10, v))
    assert len(seq) % 2 == 1
    if len(seq) == 1:
        w = seq[0]
        ratios = {Fraction(a) / b for a, b in zip(w, v) if b}
        assert len(ratios) == 1
    psi = huybrechts(L10, (3,))
    prod = Fraction(1)
    for b in cartan_dieudonne(psi):
        prod *= q(L10, b)
    assert SquareClass.of(prod) == SquareClass(-1)


def test_cartan_dieudonne_reconstructs():
    rng = random.Random(21)
    for _ in range(40):
        L = random_split_lattice(rng, 3)
        g = random_word(L, rng.randint(1, 6), 4, rng).eval()
        seq = cartan_dieudonne(g, rng.sample(range(L.rank), L.rank))
        assert len(seq) <= 2 * L.rank
        assert reflection_product(L, seq) == tuple(tuple(Fraction(x) for x in r) for r in g.matrix)


def test_spinor_examples():
    U = hyperbolic_plane()
    assert spinor_norm(reflection(U, (1, 1))) == SquareClass(1)
    for b in range(-5, 6):
        assert spinor_norm(huybrechts(L10, (b,))) == SquareClass(-1)
        assert spinor_norm(eichler(L10, (b,))) == SquareClass(1)
    assert spinor_norm(identity(L10)) == SquareClass(1)


def test_spinor_matches_zassenhaus():
    rng = random.Random(23)
    for _ in range(40):
        L = random_split_lattice(rng, 2)
        g = random_word(L, rng.randint(1, 5), 4, rng).eval()
        assert spinor_norm(g) == zassenhaus_spinor(g)


def test_twisted_spinor_and_orientation():
    w = (1, -1, 0)  # q = -1 in L_n
    s = reflection(L10, w)
    assert spinor_norm(s) == SquareClass(-1)
    assert spinor_norm_twisted(s) == SquareClass(1)
    assert is_O_plus(s)
    assert not is_O_plus(reflection(L10, (1, 1, 0)))


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_spinor_multiplicative_property(seed):
    rng = random.Random(seed)
    L = random_split_lattice(rng, 2)
    g = random_word(L, rng.randint(1, 4), 3, rng).eval()
    h = random_word(L, rng.randint(1, 4), 3, rng).eval()
    assert spinor_norm(compose(g, h)) == spinor_norm(g) * spinor_norm(h)
    # conjugation invariance
    assert spinor_norm(compose(h, compose(g, inverse(h)))) == spinor_norm(g)


def test_spinor_order_independent_on_non_split():
    rng = random.Random(29)
    for _ in range(20):
        n = rng.randint(2, 5)
        L = make_lattice(random_even_gram(n, rng, 3))
        g = negation(L)
        a = spinor_norm(g)
        b = spinor_norm(g, list(reversed(range(n))))
        assert a == b == zassenhaus_spinor(g)


# -- involutions and orders --------------------------------------------------------

def test_involution_recognition():
    for b in range(-3, 4):
        t = is_reflexive_involution(huybrechts(L10, (b,)))
        assert t.kind == "type2" and t.vector in ((1, 0, 0), (-1, 0, 0))
    w = (1, -1, 0)
    t = is_reflexive_involution(reflection(L10, w))
    assert t.kind == "type1" and t.vector in (w, tuple(-c for c in w))
    assert is_reflexive_involution(eichler(L10, (1,))).kind == "no"
    assert not is_reflexive_involution(identity(L10))


def test_reduction_residual_is_type2():
    g = make_isometry(L10, G2)
    r = compose(reflection(L10, (3, 3, 1)), compose(reflection(L10, (13, 7, 3)), g))
    assert apply(r, (1, 0, 0)) == (-1, 0, 0)
    assert is_reflexive_involution(r).kind == "type2"


def test_order_examples():
    assert order(identity(L10)).kind == "finite" and order(identity(L10)).n == 1
    assert (order(huybrechts(L10, (2,))).kind, order(huybrechts(L10, (2,))).n) == ("finite", 2)
    assert order(eichler(L10, (1,))).kind == "infinite"
    P = pell_isometry(2, 2, -2, PellSolution(20, 18, 4))
    assert order(P).kind == "infinite"
    assert all(not power(P, k).is_identity for k in range(1, 25))


def test_order_finite_exact_and_cap():
    # rotation of order 3 on A2(-1)-like even lattice [[2,-1],[-1,2]]
    L = make_lattice([[2, -1], [-1, 2]])
    rot = make_isometry(L, [[0, -1], [1, -1]])
    assert power(rot, 3).is_identity and not rot.is_identity
    res = order(rot)
    assert (res.kind, res.n) == ("finite", 3)
    assert order(compose(rot, negation(L))).n == 6
    assert order(rot, cap=2).kind == "exceeds_cap"


def test_order_matches_brute_force():
    rng = random.Random(31)
    for _ in range(40):
        L = random_split_lattice(rng, 2)
        g = random_word(L, rng.randint(1, 4), 2, rng).eval()
        res = order(g, cap=1000)
        brute = next((k for k in range(1, 61) if power(g, k).is_identity), None)
        if res.kind == "finite":
            assert brute == res.n
        else:
            assert brute is None
