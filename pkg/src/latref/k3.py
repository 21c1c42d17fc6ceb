"""Extended Neron-Severi lattices, Picard-rank-2 automorphisms and reference fixtures."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from importlib import resources
from math import isqrt
from typing import Iterator, Optional, Sequence

from sympy.solvers.diophantine.diophantine import diop_DN

from . import linalg
from .errors import (
    DiscriminantMismatch,
    FixtureFailed,
    NoSolutionFound,
    ParityFailure,
    SquareDiscriminant,
    UnknownFixture,
    WrongRank,
    WrongSignature,
)
from .lattice import Lattice, Splitting, lattice_L, make_lattice, q, signature
from .linalg import Vec
from .transforms import (
    Isometry,
    apply,
    compose,
    is_reflexive_involution,
    make_isometry,
    negation,
    reflection,
)

# -- Mukai extension ----------------------------------------------------------------


def mukai_extend(ns_gram: Sequence[Sequence[int]], label: str | None = None) -> Lattice:
    """NS + U(-1) in coordinates (r, NS-block, s).

    The pairing is L.L' - r s' - r' s; the U(-1) block (r, s) is recorded as
    a sign -1 splitting, so ``twist(L, -1)`` carries a usable U-splitting.
    """
    ns = make_lattice(ns_gram)
    k = ns.rank
    n = k + 2
    G = [[0] * n for _ in range(n)]
    for i in range(k):
        for j in range(k):
            G[i + 1][j + 1] = ns.gram[i][j]
    G[0][n - 1] = G[n - 1][0] = -1
    return Lattice(G, label=label, splitting=Splitting(0, n - 1, tuple(range(1, k + 1)), sign=-1))


def mukai_vector(r: int, ns_part: Sequence[int], s: int) -> Vec:
    return (r,) + tuple(ns_part) + (s,)


def mukai_to_split_order(L: Lattice) -> tuple[int, ...]:
    """Basis permutation (r, s, NS-block) taking a Mukai lattice to U + NS form."""
    n = L.rank
    return (0, n - 1) + tuple(range(1, n - 1))


def permute_lattice(L: Lattice, perm: Sequence[int]) -> Lattice:
    G = [[L.gram[i][j] for j in perm] for i in perm]
    return Lattice(G, label=L.label)


# -- Pell equation x^2 - D y^2 = 4 ------------------------------------------------------


@dataclass(frozen=True)
class PellSolution:
    D: int
    alpha: int
    beta: int

    def __post_init__(self):
        if self.alpha * self.alpha - self.D * self.beta * self.beta != 4:
            raise ValueError(f"({self.alpha}, {self.beta}) does not solve x^2 - {self.D} y^2 = 4")

    def __mul__(self, other: "PellSolution") -> "PellSolution":
        if self.D != other.D:
            raise DiscriminantMismatch("cannot compose solutions for different D")
        a, b, c, d = self.alpha, self.beta, other.alpha, other.beta
        return PellSolution(self.D, (a * c + self.D * b * d) // 2, (a * d + c * b) // 2)


BRUTE_FORCE_LIMIT = 10_000


def _is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def _pell_brute(D: int, limit: int) -> Optional[PellSolution]:
    for beta in range(1, limit + 1):
        t = D * beta * beta + 4
        if _is_square(t):
            return PellSolution(D, isqrt(t), beta)
    return None


def _pell_continued_fraction(D: int) -> PellSolution:
    cands = [(abs(x), abs(y)) for x, y in diop_DN(D, 4) if y]
    cands += [(2 * abs(x), 2 * abs(y)) for x, y in diop_DN(D, 1) if y]
    if not cands:
        raise NoSolutionFound(f"no solution of x^2 - {D} y^2 = 4 found")
    x, y = min(cands, key=lambda t: (t[1], t[0]))
    return PellSolution(D, x, y)


def pell(D: int, brute_force_limit: int = BRUTE_FORCE_LIMIT) -> PellSolution:
    """Fundamental solution of alpha^2 - D beta^2 = 4 with alpha, beta > 0."""
    if D <= 0:
        raise ValueError("D must be positive")
    if _is_square(D):
        raise SquareDiscriminant(f"D = {D} is a perfect square")
    sol = _pell_brute(D, brute_force_limit)
    return sol if sol is not None else _pell_continued_fraction(D)


def pell_solutions(D: int) -> Iterator[PellSolution]:
    """Fundamental solution and its powers under the composition law."""
    base = pell(D)
    cur = base
    while True:
        yield cur
        cur = cur * base


def binary_coefficients(ns_gram: Sequence[Sequence[int]]) -> tuple[int, int, int]:
    """(a, b, c) with Gram [[2a, b], [b, 2c]], i.e. q(x, y) = a x^2 + b x y + c y^2."""
    G = linalg.as_matrix(ns_gram)
    if len(G) != 2 or any(len(r) != 2 for r in G):
        raise WrongRank("expected a rank-2 Gram matrix")
    return G[0][0] // 2, G[0][1], G[1][1] // 2


def pell_isometry(a: int, b: int, c: int, solution: PellSolution) -> Isometry:
    """The symmetric isometry ((u - b v)/2, -c v; a v, (u + b v)/2), u = alpha^2 - 2, v = alpha beta."""
    D = b * b - 4 * a * c
    if D != solution.D:
        raise DiscriminantMismatch(f"form discriminant {D} differs from solution D = {solution.D}")
    u = solution.alpha ** 2 - 2
    v = solution.alpha * solution.beta
    if (u - b * v) % 2:
        raise ParityFailure("u - b v is odd")
    L = make_lattice([[2 * a, b], [b, 2 * c]])
    return make_isometry(L, [[(u - b * v) // 2, -c * v], [a * v, (u + b * v) // 2]])


# -- indefinite binary forms ---------------------------------------------------------


def _is_reduced(a: int, b: int, c: int, s: int) -> bool:
    return 0 < b <= s and 2 * abs(a) + b >= s + 1 and 2 * abs(a) - b <= s


def _rho(a: int, b: int, c: int, D: int, s: int) -> tuple[tuple[int, int, int], int]:
    """One reduction step (a, b, c) -> (c, r, (r^2 - D) / 4c) and its shift t.

    The new form is Q(-Y, X + tY) with r = 2ct - b.
    """
    m = 2 * abs(c)
    if abs(c) > s:
        # r = -b mod 2c in (-|c|, |c|]
        r = (-b) % m
        if r > abs(c):
            r -= m
    else:
        # r = -b mod 2c in (sqrt D - 2|c|, sqrt D)
        r = (-b) % m
        r += ((s - r) // m) * m
    t = (r + b) // (2 * c)
    return (c, r, (r * r - D) // (4 * c)), t


def reduced_cycle(a: int, b: int, c: int) -> list[tuple[tuple[int, int, int], linalg.Matrix]]:
    """Reduced forms equivalent to a x^2 + b x y + c y^2 with their transforms.

    Each entry (form, M) satisfies form(X, Y) = Q(M (X, Y)) with M in SL_2(Z).
    """
    D = b * b - 4 * a * c
    if D <= 0 or _is_square(D):
        raise ValueError("reduction cycle needs a positive nonsquare discriminant")
    s = isqrt(D)
    form = (a, b, c)
    M = linalg.identity(2)
    for _ in range(8 * (abs(a) + abs(b) + abs(c)).bit_length() + 64):
        if _is_reduced(*form, s):
            break
        form, t = _rho(*form, D, s)
        M = linalg.mat_mul(M, ((0, -1), (1, t)))
    if not _is_reduced(*form, s):
        raise ArithmeticError("form did not reduce")
    start = form
    out = []
    while True:
        out.append((form, M))
        form, t = _rho(*form, D, s)
        M = linalg.mat_mul(M, ((0, -1), (1, t)))
        if form == start:
            return out


def _canonical(v: tuple[int, int]) -> tuple[int, int]:
    return v if next(c for c in v if c) > 0 else (-v[0], -v[1])


def _witness_key(v: tuple[int, int]):
    return (abs(v[0]) + abs(v[1]), -abs(v[0]), v)


def represents(ns_gram: Sequence[Sequence[int]], m: int) -> Optional[tuple[int, int]]:
    """Primitive (x, y) with q(x L1 + y L2) = m, for m in {0, 1, -1}; None if there is none."""
    a, b, c = binary_coefficients(ns_gram)
    D = b * b - 4 * a * c
    if _is_square(D):
        if m != 0:
            raise ValueError("only isotropy is decided for square discriminants")
        from .transforms import _binary_isotropic
        sols = _binary_isotropic(a, b, c)
        return min((_canonical(v) for v in sols), key=_witness_key) if sols else None
    if m == 0:
        return None
    if m not in (1, -1):
        raise ValueError("cycle method implemented for m = +-1 only")
    # |m| < sqrt(D)/2, so every primitive representation shows up as a first coefficient
    cycle = reduced_cycle(a, b, c)
    found = []
    for (fa, fb, fc), M in cycle:
        if fa == m:
            found.append((M[0][0], M[1][0]))
        if fc == m:
            found.append((M[0][1], M[1][1]))
    if not found:
        return None
    auto = _automorph(a, b, c, cycle)
    return min((_shrink(w, auto) for w in found), key=_witness_key)


def _automorph(a: int, b: int, c: int, cycle) -> linalg.Matrix:
    """Generator of the proper automorphs: one full turn of the reduced cycle."""
    D = b * b - 4 * a * c
    s = isqrt(D)
    form, M = cycle[-1]
    _, t = _rho(*form, D, s)
    M_end = linalg.mat_mul(M, ((0, -1), (1, t)))
    return linalg.mat_mul(M_end, linalg.integer_inverse(cycle[0][1]))


def _shrink(w: tuple[int, int], auto: linalg.Matrix) -> tuple[int, int]:
    """Smallest vector in the orbit of w under the automorph group."""
    best = _canonical(w)
    for step in (auto, linalg.integer_inverse(auto)):
        cur = w
        while True:
            nxt = linalg.mat_vec(step, cur)
            if _witness_key(_canonical(nxt)) >= _witness_key(_canonical(cur)):
                break
            cur = nxt
        if _witness_key(_canonical(cur)) < _witness_key(best):
            best = _canonical(cur)
    return best


@dataclass(frozen=True)
class AutType:
    tag: str  # "Finite" | "InfiniteDihedral" | "InfiniteCyclic"
    witness: Optional[Vec] = None

    def to_json(self) -> dict:
        return {"tag": self.tag, "witness": None if self.witness is None else list(self.witness)}


def aut_trichotomy(ns_gram: Sequence[Sequence[int]]) -> AutType:
    """Finite if 0 or -2 is a square of NS, else InfiniteDihedral if 2 is, else InfiniteCyclic."""
    G = linalg.as_matrix(ns_gram)
    if len(G) != 2:
        raise WrongRank(f"expected rank 2, got {len(G)}")
    L = make_lattice(G)
    if signature(L) != (1, 1):
        raise WrongSignature(f"expected signature (1, 1), got {signature(L)}")
    a, b, c = binary_coefficients(G)
    D = b * b - 4 * a * c
    if _is_square(D):
        return AutType("Finite", represents(G, 0))
    w = represents(G, -1)
    if w is not None:
        return AutType("Finite", w)
    w = represents(G, 1)
    if w is not None:
        return AutType("InfiniteDihedral", w)
    return AutType("InfiniteCyclic")


# -- fixtures ---------------------------------------------------------------------

PICARD1_SET = (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 13, 14, 15, 16, 17, 19, 21, 23, 25, 26, 29, 31, 41, 49)
FIXTURES = ("e8_involution", "n10_reduction", "oguiso", "picard1_set")


def load_fixture(name: str) -> dict:
    if name not in FIXTURES:
        raise UnknownFixture(f"unknown fixture {name!r}; expected one of {', '.join(FIXTURES)}")
    text = resources.files("latref").joinpath("fixtures", f"{name}.json").read_text()
    return json.loads(text)


def _first_diff(A, B) -> Optional[str]:
    for i, (ra, rb) in enumerate(zip(A, B)):
        for j, (x, y) in enumerate(zip(ra, rb)):
            if x != y:
                return f"entry ({i}, {j}): got {x}, expected {y}"
    return None


def _check(cond: bool, msg: str) -> None:
    if not cond:
        raise FixtureFailed(msg)


def _check_equal(got, expected, what: str) -> None:
    if isinstance(got, tuple) and got and isinstance(got[0], tuple):
        d = _first_diff(got, expected)
        if d is not None:
            raise FixtureFailed(f"{what}: {d}")
    elif tuple(got) != tuple(expected):
        raise FixtureFailed(f"{what}: got {list(got)}, expected {list(expected)}")


def e8_involution_lattice(omega_square: int = 2, data: dict | None = None) -> Lattice:
    data = data or load_fixture("e8_involution")
    block = data["u_minus_1_gram"], data["e8_minus_2_gram"]
    G = linalg.block_diag([[omega_square]], *block)
    return make_lattice(G, label="Zw+U(-1)+E8(-2)")


def _verify_e8(omega_square: int = 2) -> dict:
    data = load_fixture("e8_involution")
    L = e8_involution_lattice(omega_square, data)
    g = None
    for v in data["vectors"]:
        full = (0,) + tuple(v)
        _check(q(L, full) in (1, -1), f"vector {v} does not have square +-2")
        s = reflection(L, full)
        g = s if g is None else compose(g, s)
    expected = linalg.block_diag([[1]], linalg.identity(2), linalg.mat_scale(-1, linalg.identity(8)))
    _check_equal(g.matrix, expected, "product of reflections")
    return {"checks": ["ten +-2 vectors", "product equals id + id + (-id)"], "omega_square": omega_square}


def _verify_n10() -> dict:
    from .decompose import decompose

    data = load_fixture("n10_reduction")
    L = lattice_L(data["n"])
    g2 = make_isometry(L, data["g2"])
    e = L.basis_vector(0)
    _check_equal(apply(g2, e), data["g2_e"], "g2(e)")
    v1, v2 = tuple(data["v1"]), tuple(data["v2"])
    after1 = apply(reflection(L, v1), apply(g2, e))
    _check_equal(after1, data["after_v1"], "s_v1 g2(e)")
    residual = compose(reflection(L, v2), compose(reflection(L, v1), g2))
    _check_equal(apply(residual, e), tuple(-c for c in e), "s_v2 s_v1 g2(e)")
    kind = is_reflexive_involution(residual)
    _check(kind.kind == "type2", f"residual recognized as {kind.kind}, expected type2")
    res = decompose(g2)
    _check(res.status == "Success", f"decompose returned {res.status}")
    _check(len(res.word) <= 3, f"word has {len(res.word)} tokens, expected at most 3")
    _check_equal(res.word.eval().matrix, g2.matrix, "evaluated word")
    return {"checks": ["g2 isometry", "two reflection steps", "type2 residual", "decompose"],
            "word": res.word.to_json()}


def _verify_oguiso() -> dict:
    data = load_fixture("oguiso")
    L = mukai_extend(data["ns_gram"])
    vecs = [tuple(a) for a in data["a"]]
    for a in vecs:
        _check(q(L, a) == 1, f"q({list(a)}) = {q(L, a)}, expected 1")
    P = negation(L)
    for a in vecs:
        P = compose(P, reflection(L, a))
    make_isometry(L, P.matrix)
    M = P.matrix
    I = linalg.identity(L.rank)
    for k in range(1, data["min_order_exceeds"] + 1):
        _check(linalg.mat_pow(M, k) != I, f"P^{k} is the identity")
    return {"checks": ["four square-2 vectors", "P isometry", f"P^k != id for k <= {data['min_order_exceeds']}"],
            "P": [list(r) for r in M]}


def picard1_roundtrip(ns: Sequence[int], words_per_n: int = 20, max_length: int = 8, seed: int = 0) -> dict:
    from .decompose import decompose
    from .words import random_word

    rng = random.Random(seed)
    total = success = 0
    for n in ns:
        L = lattice_L(n)
        for _ in range(words_per_n):
            g = random_word(L, rng.randint(1, max_length), 10, rng).eval()
            res = decompose(g)
            total += 1
            if res.status == "Success":
                _check_equal(res.word.eval().matrix, g.matrix, f"round trip on L_{n}")
                success += 1
    return {"words": total, "success": success}


def _verify_picard1() -> dict:
    data = load_fixture("picard1_set")
    ns = tuple(data["set"])
    _check(ns == PICARD1_SET, "stored set differs from the library constant")
    stats = picard1_roundtrip([n for n in ns if n <= 10])
    _check(stats["success"] >= 0.9 * stats["words"],
           f"only {stats['success']} of {stats['words']} words decomposed")
    return {"checks": ["set data", "decompose round trips"], "set": list(ns), **stats}


_VERIFIERS = {
    "e8_involution": _verify_e8,
    "n10_reduction": _verify_n10,
    "oguiso": _verify_oguiso,
    "picard1_set": _verify_picard1,
}


def verify_fixture(name: str) -> dict:
    if name not in _VERIFIERS:
        raise UnknownFixture(f"unknown fixture {name!r}; expected one of {', '.join(FIXTURES)}")
    report = _VERIFIERS[name]()
    return {"fixture": name, "status": "pass", **report}
