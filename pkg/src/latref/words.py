"""Words in the reflexive-involution generators and their evaluation."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from .errors import MalformedWord
from .lattice import Lattice, q
from .linalg import Vec
from .squares import SquareClass
from .transforms import (
    Isometry,
    _sigma_vector,
    compose,
    eichler,
    huybrechts,
    identity,
    negation,
    reflection,
    spinor_norm,
)


@dataclass(frozen=True)
class Refl:
    v: Vec


@dataclass(frozen=True)
class Eichler:
    b: Vec


@dataclass(frozen=True)
class Huy:
    b: Vec
    a: Optional[Vec] = None


@dataclass(frozen=True)
class Neg:
    pass


Token = Union[Refl, Eichler, Huy, Neg]


def token_isometry(L: Lattice, t: Token) -> Isometry:
    if isinstance(t, Refl):
        if q(L, t.v) not in (1, -1):
            raise MalformedWord(f"Refl{list(t.v)} is not a +-2 reflection")
        return reflection(L, t.v)
    if isinstance(t, Eichler):
        return eichler(L, t.b)
    if isinstance(t, Huy):
        return huybrechts(L, t.b, t.a)
    if isinstance(t, Neg):
        return negation(L)
    raise MalformedWord(f"unknown token {t!r}")


def token_inverse(t: Token) -> Token:
    if isinstance(t, Eichler):
        return Eichler(tuple(-c for c in t.b))
    return t  # the others are involutions


@dataclass(frozen=True)
class GeneratorWord:
    """Tokens t_1 ... t_k standing for t_1 o t_2 o ... o t_k."""

    lattice: Lattice
    tokens: tuple[Token, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))

    def __len__(self) -> int:
        return len(self.tokens)

    def __add__(self, other: "GeneratorWord") -> "GeneratorWord":
        return GeneratorWord(self.lattice, self.tokens + other.tokens)

    def inverse(self) -> "GeneratorWord":
        return GeneratorWord(self.lattice, tuple(token_inverse(t) for t in reversed(self.tokens)))

    def eval(self) -> Isometry:
        g = identity(self.lattice)
        for t in self.tokens:
            g = compose(g, token_isometry(self.lattice, t))
        return g

    def counts(self) -> dict[str, int]:
        out = {"refl": 0, "eichler": 0, "huy": 0, "neg": 0}
        for t in self.tokens:
            out[_OP[type(t)]] += 1
        return out

    def predicted_det(self) -> int:
        c = self.counts()
        return (-1) ** (c["refl"] + c["neg"] * (self.lattice.rank % 2))

    def predicted_spinor_norm(self) -> SquareClass:
        cls = SquareClass(1)
        for t in self.tokens:
            cls = cls * token_spinor_class(self.lattice, t)
        return cls

    def to_json(self) -> list[dict]:
        return [token_to_json(self.lattice, t) for t in self.tokens]

    @classmethod
    def from_json(cls, L: Lattice, data: Iterable[dict]) -> "GeneratorWord":
        try:
            return cls(L, tuple(token_from_json(L, d) for d in data))
        except TypeError as exc:
            raise MalformedWord(f"word must be a list of token objects: {exc}") from exc


_OP = {Refl: "refl", Eichler: "eichler", Huy: "huy", Neg: "neg"}


def token_spinor_class(L: Lattice, t: Token) -> SquareClass:
    if isinstance(t, Refl):
        return SquareClass(q(L, t.v))
    if isinstance(t, Eichler):
        return SquareClass(1)
    if isinstance(t, Huy):
        return SquareClass(-1)
    return spinor_norm(negation(L))


def token_to_json(L: Lattice, t: Token) -> dict:
    if isinstance(t, Refl):
        return {"op": "refl", "v": list(t.v)}
    if isinstance(t, Eichler):
        return {"op": "eichler", "b": list(t.b)}
    if isinstance(t, Huy):
        d = {"op": "huy", "b": list(t.b)}
        if t.a is not None:
            d["a"] = list(t.a)
        return d
    return {"op": "neg"}


def _int_vec(x, name: str) -> Vec:
    if not isinstance(x, (list, tuple)) or not all(isinstance(c, int) and not isinstance(c, bool) for c in x):
        raise MalformedWord(f"{name} must be a list of integers")
    return tuple(x)


def token_from_json(L: Lattice, d: dict) -> Token:
    if not isinstance(d, dict) or "op" not in d:
        raise MalformedWord("token must be an object with an 'op' field")
    op = d["op"]
    if op == "refl":
        v = _int_vec(d.get("v"), "refl.v")
        if len(v) != L.rank:
            raise MalformedWord("refl.v has the wrong length")
        return Refl(v)
    if op == "eichler":
        return Eichler(_sigma_vector(L, _int_vec(d.get("b"), "eichler.b")))
    if op == "huy":
        a = d.get("a")
        return Huy(_sigma_vector(L, _int_vec(d.get("b"), "huy.b")),
                   None if a is None else _int_vec(a, "huy.a"))
    if op == "neg":
        return Neg()
    raise MalformedWord(f"unknown op {op!r}")


def random_word(L: Lattice, length: int, coeff: int = 10, rng: random.Random | None = None,
                ops: Sequence[str] = ("refl", "eichler", "huy", "neg")) -> GeneratorWord:
    """Random word of exactly ``length`` tokens with parameters bounded by ``coeff``."""
    from .vectors import reflection_vectors

    rng = rng or random.Random()
    sp = L.require_splitting()
    refl_pool = reflection_vectors(L, coeff)
    e, f = L.basis_vector(sp.e), L.basis_vector(sp.f)
    conj_pool = [None, tuple(a - b for a, b in zip(e, f)), tuple(a + b for a, b in zip(e, f))]
    tokens = []
    for _ in range(length):
        op = rng.choice(ops)
        if op == "refl" and refl_pool:
            tokens.append(Refl(rng.choice(refl_pool)))
        elif op in ("eichler", "huy", "refl"):
            b = L.embed_sigma([rng.randint(-coeff, coeff) for _ in sp.sigma])
            if op == "huy":
                tokens.append(Huy(b, rng.choice(conj_pool)))
            else:
                tokens.append(Eichler(b))
        else:
            tokens.append(Neg())
    return GeneratorWord(L, tuple(tokens))
