import random

import pytest

from latref import linalg
from latref.lattice import make_lattice, split_lattice

ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, ok: bool, summary: str) -> None:
    ACCEPTANCE_LINES.append(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {summary}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def random_unimodular(n: int, rng: random.Random, steps: int = 12):
    T = [list(r) for r in linalg.identity(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        kind = rng.random()
        if n > 1 and kind < 0.7:
            c = rng.choice([-2, -1, 1, 2])
            for r in range(n):
                T[r][j] += c * T[r][i]
        elif n > 1 and kind < 0.85:
            for r in range(n):
                T[r][i], T[r][j] = T[r][j], T[r][i]
        else:
            for r in range(n):
                T[r][i] = -T[r][i]
    return linalg.as_matrix(T)


def congruent_gram(G, T):
    return linalg.mat_mul(linalg.mat_mul(linalg.transpose(T), G), T)


def random_even_gram(n: int, rng: random.Random, bound: int = 4):
    """Random nondegenerate even symmetric Gram matrix."""
    while True:
        G = [[0] * n for _ in range(n)]
        for i in range(n):
            G[i][i] = 2 * rng.randint(-bound, bound)
            for j in range(i + 1, n):
                G[i][j] = G[j][i] = rng.randint(-bound, bound)
        if linalg.det(G) != 0:
            return linalg.as_matrix(G)


def random_split_lattice(rng: random.Random, max_sigma: int = 2):
    s = rng.randint(1, max_sigma)
    return split_lattice(make_lattice(random_even_gram(s, rng, 3)))


@pytest.fixture
def rng():
    return random.Random(12345)
