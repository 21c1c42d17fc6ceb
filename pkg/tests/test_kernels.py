import random

import pytest

from conftest import random_even_gram
from latref import _kernels_py, kernels
from latref.lattice import lattice_L, make_lattice, q

needs_compiled = pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled extension not built")


def test_python_box_vectors_brute_force():
    G = lattice_L(2).gram
    L = lattice_L(2)
    found = set(_kernels_py.box_vectors(G, 2, 3))
    for v in found:
        assert q(L, v) == 1 and max(map(abs, v)) <= 3


@needs_compiled
def test_box_vectors_backends_agree():
    rng = random.Random(91)
    for _ in range(30):
        n = rng.randint(1, 4)
        G = random_even_gram(n, rng, 4)
        for t in (2, -2, 0):
            a = sorted(kernels.box_vectors(G, t, 3))
            b = sorted(kernels.box_vectors(G, t, 3, backend="python"))
            assert a == b


@needs_compiled
def test_split_vectors_backends_agree():
    rng = random.Random(93)
    for _ in range(30):
        s = rng.randint(1, 3)
        S = random_even_gram(s, rng, 4)
        for t in (1, -1):
            a = sorted(kernels.split_vectors(S, t, 6))
            b = sorted(kernels.split_vectors(S, t, 6, backend="python"))
            assert a == b


@needs_compiled
def test_argmin_backends_agree():
    rng = random.Random(95)
    for _ in range(50):
        n = rng.randint(2, 5)
        m = rng.randint(1, 60)
        Re = [tuple(rng.randint(-40, 40) for _ in range(n)) for _ in range(m)]
        Rf = [tuple(rng.randint(-40, 40) for _ in range(n)) for _ in range(m)]
        x = tuple(rng.randint(-10 ** 6, 10 ** 6) for _ in range(n))
        assert kernels.argmin_height(Re, Rf, x) == kernels.argmin_height(Re, Rf, x, backend="python")


def test_argmin_bigint_fallback():
    big = 10 ** 30
    Re = [(1, 0, 0), (0, 1, 0)]
    Rf = [(0, 1, 0), (1, 0, 0)]
    x = (big, 1, 0)
    k, h = kernels.argmin_height(Re, Rf, x)
    assert h == big + 1 and k == 0


def test_argmin_empty_pool():
    assert kernels.argmin_height([], [], (1, 0)) == (-1, None)


def test_split_vectors_huge_gram_fallback():
    S = [[-2 * 10 ** 20]]
    assert kernels.split_vectors(S, 1, 2) == _kernels_py.split_vectors(S, 1, 2)


def test_box_vectors_huge_gram_fallback():
    G = make_lattice([[0, 1], [1, 2 * 10 ** 19]]).gram
    assert sorted(kernels.box_vectors(G, 2, 2)) == sorted(_kernels_py.box_vectors(G, 2, 2))
