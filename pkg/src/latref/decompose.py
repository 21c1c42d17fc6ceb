"""Wall-style reduction of isometries of U + sigma into reflexive involutions.

An isometry g is pushed towards the stabilizer of e by greedily composing
with +-2 reflections (and, when those stall, Huybrechts involutions) so that
the height |alpha| + |beta| of g(e) = alpha e + beta f + z shrinks.  Once
g(e) = +-e the remaining U-action is read off and peeled as a Huybrechts
involution or an Eichler transformation, leaving an isometry of sigma.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from operator import mul
from typing import Optional

from . import kernels, linalg
from .errors import Exhausted, MalformedResidual, NoSplitting, NotTwiceEven, SigmaNotHandled
from .lattice import Lattice, gram_vector, is_stable, q
from .linalg import Vec
from .transforms import (
    Isometry,
    compose,
    huybrechts,
    identity,
    is_O_plus,
    is_reflexive_involution,
    negation,
    reflection,
    spinor_norm,
)
from .vectors import _canonical, reflection_vectors, short_vectors  # noqa: F401
from .words import Eichler, GeneratorWord, Huy, Neg, Refl, Token, token_isometry


def _default_box() -> int:
    env = os.environ.get("LATREF_SEARCH_BOX")
    if env:
        try:
            box = int(env)
        except ValueError:
            raise ValueError(f"LATREF_SEARCH_BOX must be a positive integer, got {env!r}") from None
        if box >= 1:
            return box
        raise ValueError(f"LATREF_SEARCH_BOX must be a positive integer, got {env!r}")
    return 16


@dataclass(frozen=True)
class SearchOptions:
    coeff_box: int = field(default_factory=_default_box)
    max_steps: int = 64
    escalation: tuple[int, ...] = (16, 64, 256)
    use_huybrechts: bool = True

    def __post_init__(self):
        object.__setattr__(self, "escalation", tuple(self.escalation))
        if self.coeff_box < 1 or self.max_steps < 1:
            raise ValueError("coeff_box and max_steps must be positive")
        if any(a >= b for a, b in zip(self.escalation, self.escalation[1:])):
            raise ValueError("escalation boxes must be strictly increasing")

    @property
    def boxes(self) -> tuple[int, ...]:
        return (self.coeff_box,) + tuple(b for b in self.escalation if b > self.coeff_box)


@dataclass(frozen=True)
class DecomposeResult:
    word: Optional[GeneratorWord]
    residual_height: int
    steps_used: int
    status: str  # "Success" | "Exhausted"
    height_trace: tuple[int, ...] = ()
    boxes_used: tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "word": None if self.word is None else self.word.to_json(),
            "residual_height": self.residual_height,
            "steps_used": self.steps_used,
            "height_trace": list(self.height_trace),
            "boxes_used": list(self.boxes_used),
        }


# -- candidate pools ---------------------------------------------------------------

@dataclass(frozen=True)
class _Pool:
    tokens: tuple[Token, ...]
    rows_e: tuple[Vec, ...]
    rows_f: tuple[Vec, ...]


@lru_cache(maxsize=32)
def _reflection_pool(L: Lattice, box: int) -> _Pool:
    sp = L.splitting
    ie, jf = sp.e, sp.f
    gram = L.gram
    unit_e = [int(j == ie) for j in range(L.rank)]
    unit_f = [int(j == jf) for j in range(L.rank)]
    entries = []
    for qv in (1, -1):
        for v in short_vectors(L, qv, box):
            gv = [sum(map(mul, row, v)) for row in gram]
            # row i of s_v is delta_i - v_i * (G v) / q(v); q(v) = +-1
            ce, cf = v[ie] * qv, v[jf] * qv
            entries.append((v, tuple(u - ce * x for u, x in zip(unit_e, gv)),
                            tuple(u - cf * x for u, x in zip(unit_f, gv))))
    entries.sort()
    return _Pool(tuple(Refl(v) for v, _, _ in entries), tuple(r for _, r, _ in entries),
                 tuple(r for _, _, r in entries))


@lru_cache(maxsize=32)
def _huybrechts_pool(L: Lattice, box: int) -> _Pool:
    sp = L.splitting
    n = L.rank
    e, f = L.basis_vector(sp.e), L.basis_vector(sp.f)
    e_minus_f = _canonical(tuple(a - b for a, b in zip(e, f)))
    toks, re, rf = [], [], []
    sigma_box = box if len(sp.sigma) <= 1 else max(1, min(box, 4))
    rng = range(-sigma_box, sigma_box + 1)
    for z in product(rng, repeat=len(sp.sigma)):
        b = L.embed_sigma(z)
        qb = q(L, b)
        gb = gram_vector(L, b)
        row = [gb[j] if j in sp.sigma else 0 for j in range(n)]
        # psi_b: alpha' = (b, z) - r + q(b) s, beta' = -s
        ra = list(row)
        ra[sp.e], ra[sp.f] = -1, qb
        toks.append(Huy(b))
        re.append(tuple(ra))
        rf.append(tuple(-int(j == sp.f) for j in range(n)))
        # psi_{b, e-f}: alpha' = -r, beta' = (b, z) - s + q(b) r
        rb = list(row)
        rb[sp.e], rb[sp.f] = qb, -1
        toks.append(Huy(b, e_minus_f))
        re.append(tuple(-int(j == sp.e) for j in range(n)))
        rf.append(tuple(rb))
    return _Pool(tuple(toks), tuple(re), tuple(rf))


def height(g: Isometry) -> int:
    sp = g.lattice.require_splitting()
    x = g.column(sp.e)
    return abs(x[sp.e]) + abs(x[sp.f])


def _is_pm(x: Vec, idx: int) -> int:
    """+1 / -1 if x is +-(basis vector idx), else 0."""
    for j, c in enumerate(x):
        if j != idx and c:
            return 0
    return x[idx] if x[idx] in (1, -1) else 0


@dataclass
class _Reduction:
    prefix: list  # tokens T_k, ..., T_1 with T_k o ... o T_1 o g = residual
    residual: Isometry
    trace: list
    boxes: list
    done: bool


def _reduce(g: Isometry, opts: SearchOptions) -> _Reduction:
    L = g.lattice
    sp = L.require_splitting()
    e, f = L.basis_vector(sp.e), L.basis_vector(sp.f)
    e_minus_f = _canonical(tuple(a - b for a, b in zip(e, f)))
    state = _Reduction([], g, [height(g)], [], False)
    for _ in range(opts.max_steps + 1):
        x = state.residual.column(sp.e)
        if _is_pm(x, sp.e):
            state.done = True
            return state
        if len(state.prefix) >= opts.max_steps:
            break
        h = state.trace[-1]
        step: Optional[Token] = None
        used = None
        if _is_pm(x, sp.f):
            # s_{e-f} swaps e and f; reaching +-e ends the reduction
            step, used = Refl(e_minus_f), 0
        else:
            for box in opts.boxes:
                pools = [_reflection_pool(L, box)]
                if opts.use_huybrechts:
                    pools.append(_huybrechts_pool(L, box))
                for pool in pools:
                    k, hk = kernels.argmin_height(pool.rows_e, pool.rows_f, x)
                    if k >= 0 and hk < h:
                        step, used = pool.tokens[k], box
                        break
                if step is not None:
                    break
        if step is None:
            break
        state.residual = compose(token_isometry(L, step), state.residual)
        state.prefix.insert(0, step)
        state.trace.append(height(state.residual))
        state.boxes.append(used)
    return state


def reduce_on_U(g: Isometry, opts: SearchOptions | None = None) -> tuple[GeneratorWord, Isometry]:
    """Prefix word P and residual P(g) with residual(e) = +-e.

    Raises Exhausted (carrying the best residual height and the height trace)
    when no admissible step exists within the largest box or max_steps runs out.
    """
    opts = opts or SearchOptions()
    st = _reduce(g, opts)
    if not st.done:
        exc = Exhausted(f"height stuck at {st.trace[-1]} after {len(st.prefix)} steps")
        exc.residual_height = st.trace[-1]
        exc.height_trace = tuple(st.trace)
        raise exc
    return GeneratorWord(g.lattice, tuple(st.prefix)), st.residual


# -- peeling ---------------------------------------------------------------------

def _sigma_action(r: Isometry) -> list[list[int]]:
    sp = r.lattice.splitting
    return [[r.matrix[i][j] for j in sp.sigma] for i in sp.sigma]


def peel(residual: Isometry, opts: SearchOptions | None = None) -> GeneratorWord:
    """Word for an isometry with residual(e) = +-e."""
    opts = opts or SearchOptions()
    L = residual.lattice
    sp = L.require_splitting()
    e, f = L.basis_vector(sp.e), L.basis_vector(sp.f)
    x = residual.column(sp.e)
    sgn = _is_pm(x, sp.e)
    if not sgn:
        raise MalformedResidual("residual does not send e to +-e")
    y = residual.column(sp.f)
    b = tuple(0 if j in (sp.e, sp.f) else c for j, c in enumerate(y))
    qb = q(L, b)
    tokens: list[Token] = []
    if sgn < 0:
        # residual(f) = q(b) e - f + b
        if y[sp.f] != -1 or y[sp.e] != qb:
            raise MalformedResidual(f"f-image {list(y)} is not of the form q(b)e - f + b")
        tokens.append(Huy(b))
        rest = compose(huybrechts(L, b), residual)
    else:
        # residual(f) = -q(b) e + f + b, the f-image of E_b = psi_0 o psi_b
        if y[sp.f] != 1 or y[sp.e] != -qb:
            raise MalformedResidual(f"f-image {list(y)} is not of the form -q(b)e + f + b")
        if any(b):
            e_minus_f = _canonical(tuple(a - c for a, c in zip(e, f)))
            e_plus_f = tuple(a + c for a, c in zip(e, f))
            eb = [Refl(e_minus_f), Refl(e_plus_f), Huy(b)]
            tokens.extend(eb)
            rest = residual
            for t in eb:  # E_b^-1 = psi_b o psi_0
                rest = compose(token_isometry(L, t), rest)
        else:
            rest = residual
    if rest.column(sp.e) != e or rest.column(sp.f) != f:
        raise MalformedResidual("peeled residual does not fix U pointwise")
    return GeneratorWord(L, tuple(tokens)) + _sigma_word(rest, opts)


def _sigma_word(r: Isometry, opts: SearchOptions) -> GeneratorWord:
    """Word for an isometry fixing U pointwise, from reflections inside sigma."""
    L = r.lattice
    sp = L.splitting
    s = len(sp.sigma)
    I = linalg.identity(s)
    H = _sigma_action(r)
    if H == [list(row) for row in I]:
        return GeneratorWord(L)
    neg_sigma = [Neg(), Huy(L.embed_sigma([0] * s))]  # -id_sigma = Neg o psi_0
    if s == 1:
        gen = L.embed_sigma([1])
        if q(L, gen) in (1, -1):
            return GeneratorWord(L, (Refl(gen),))
        return GeneratorWord(L, tuple(neg_sigma))
    S = L.sigma_lattice()
    for prefix, target in (([], H), (neg_sigma, [[-c for c in row] for row in H])):
        word = _greedy_sigma(S, target, opts)
        if word is not None:
            return GeneratorWord(L, tuple(prefix) + tuple(Refl(L.embed_sigma(v)) for v in word))
    raise SigmaNotHandled("sigma-block action not reached by +-2 reflections inside sigma")


def _distance(M, I) -> int:
    return sum(abs(a - b) for ra, rb in zip(M, I) for a, b in zip(ra, rb))


def _greedy_sigma(S: Lattice, H, opts: SearchOptions) -> Optional[list[Vec]]:
    """Vectors v_1..v_k of S with H = s_{v_1} o ... o s_{v_k}, found greedily."""
    n = S.rank
    I = linalg.identity(n)
    M = linalg.as_matrix(H)
    found: list[Vec] = []
    box = min(opts.coeff_box, 4 if n > 4 else opts.coeff_box)
    cands = [v for v in short_vectors(S, 1, box) + short_vectors(S, -1, box)]
    cands.sort()
    refl = [reflection(S, v).matrix for v in cands]
    for _ in range(4 * n + 4):
        d = _distance(M, I)
        if d == 0:
            return found
        best = None
        for v, R in zip(cands, refl):
            M2 = linalg.mat_mul(R, M)
            d2 = _distance(M2, I)
            if d2 < d and (best is None or d2 < best[0]):
                best = (d2, v, M2)
        if best is None:
            return None
        found.append(best[1])
        M = best[2]
    return found if _distance(M, I) == 0 else None


# -- simplification and the driver ---------------------------------------------------

def _simplify(L: Lattice, tokens: list[Token]) -> list[Token]:
    negs = sum(isinstance(t, Neg) for t in tokens)
    out: list[Token] = [Neg()] if negs % 2 else []
    start = len(out)
    for t in tokens:
        if isinstance(t, Neg):
            continue
        if len(out) > start and out[-1] == t and not isinstance(t, Eichler):  # t o t = id for involution tokens
            out.pop()
        else:
            out.append(t)
    return out


def _reflection_shortcut(g: Isometry) -> Optional[GeneratorWord]:
    if g.det != -1:
        return None
    kind = is_reflexive_involution(g, search_bound=1)
    if kind.kind == "type1":
        return GeneratorWord(g.lattice, (Refl(kind.vector),))
    return None


def decompose(g: Isometry, opts: SearchOptions | None = None) -> DecomposeResult:
    opts = opts or SearchOptions()
    L = g.lattice
    L.require_splitting()
    if g.is_identity:
        return DecomposeResult(GeneratorWord(L), 0, 0, "Success", (height(g),))
    short = _reflection_shortcut(g)
    if short is not None:
        return DecomposeResult(short, 0, 0, "Success", (height(g),))
    st = _reduce(g, opts)
    if not st.done:
        return DecomposeResult(None, st.trace[-1], len(st.prefix), "Exhausted",
                               tuple(st.trace), tuple(st.boxes))
    prefix = GeneratorWord(L, tuple(st.prefix))
    raw = prefix.inverse() + peel(st.residual, opts)
    word = GeneratorWord(L, tuple(_simplify(L, list(raw.tokens))))
    if word.eval().matrix != g.matrix:
        word = raw
    if word.eval().matrix != g.matrix:
        raise ArithmeticError("decomposition failed its own verification")
    return DecomposeResult(word, 0, len(st.prefix), "Success", tuple(st.trace), tuple(st.boxes))


def classify(g: Isometry, opts: SearchOptions | None = None) -> dict:
    """Membership flags: exact group-theoretic ones plus constructive witnesses."""
    from .padic import mod2_fix_witness

    L = g.lattice
    spin = spinor_norm(g)
    flags = {
        "stable": is_stable(L, g),
        "O_plus": is_O_plus(g),
        "spin_trivial": spin.is_trivial,
        "spinor_norm": spin.value,
        "det": g.det,
        "in_W_witness": None,
        "not_in_Rpm_witness": False,
    }
    try:
        res = decompose(g, opts)
        if res.status == "Success":
            flags["in_W_witness"] = res.word
    except (NoSplitting, SigmaNotHandled, MalformedResidual):
        pass
    try:
        flags["not_in_Rpm_witness"] = not mod2_fix_witness(L, g)
    except (NoSplitting, NotTwiceEven):
        pass
    return flags


__all__ = [
    "SearchOptions", "DecomposeResult", "short_vectors", "reduce_on_U", "peel",
    "decompose", "classify", "height",
]
