import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_split_lattice
from latref.errors import MalformedWord, VectorNotInSigma
from latref.lattice import lattice_L
from latref.transforms import compose, eichler, huybrechts, negation, reflection, spinor_norm
from latref.words import Eichler, GeneratorWord, Huy, Neg, Refl, random_word, token_isometry

L10 = lattice_L(10)


def test_empty_word_is_identity():
    assert GeneratorWord(L10).eval().is_identity
    assert len(GeneratorWord(L10)) == 0


def test_evaluation_order():
    w = GeneratorWord(L10, (Refl((13, 7, 3)), Eichler((0, 0, 1))))
    assert w.eval() == compose(reflection(L10, (13, 7, 3)), eichler(L10, (0, 0, 1)))


def test_token_isometries():
    assert token_isometry(L10, Huy((0, 0, 2), (1, 1, 0))) == huybrechts(L10, (2,), (1, 1, 0))
    assert token_isometry(L10, Neg()) == negation(L10)
    with pytest.raises(MalformedWord):
        token_isometry(L10, Refl((0, 0, 1)))  # q = -10


def test_inverse_word():
    rng = random.Random(51)
    for _ in range(30):
        w = random_word(L10, rng.randint(0, 8), 10, rng)
        assert (w + w.inverse()).eval().is_identity


def test_json_roundtrip():
    rng = random.Random(53)
    for _ in range(30):
        L = random_split_lattice(rng, 3)
        w = random_word(L, rng.randint(0, 8), 5, rng)
        text = json.dumps(w.to_json())
        back = GeneratorWord.from_json(L, json.loads(text))
        assert back == w


def test_json_sigma_coordinates_accepted():
    w = GeneratorWord.from_json(L10, [{"op": "eichler", "b": [3]}, {"op": "huy", "b": [0, 0, 1], "a": [1, -1, 0]}])
    assert w.tokens == (Eichler((0, 0, 3)), Huy((0, 0, 1), (1, -1, 0)))


@pytest.mark.parametrize("bad", [
    [{"op": "twist"}],
    [{"v": [1, 1, 0]}],
    [{"op": "refl", "v": [1, 1]}],
    [{"op": "refl", "v": [1, "x", 0]}],
    [{"op": "refl", "v": [True, 1, 0]}],
    ["refl"],
    5,
])
def test_malformed_words(bad):
    with pytest.raises(MalformedWord):
        GeneratorWord.from_json(L10, bad)


def test_sigma_vector_rejected():
    with pytest.raises(VectorNotInSigma):
        GeneratorWord.from_json(L10, [{"op": "eichler", "b": [1, 0, 1]}])


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 6), st.integers(min_value=0, max_value=8))
def test_parity_consistency(seed, length):
    rng = random.Random(seed)
    L = random_split_lattice(rng, 2)
    w = random_word(L, length, 6, rng)
    g = w.eval()
    assert g.det == w.predicted_det()
    assert spinor_norm(g) == w.predicted_spinor_norm()


def test_counts_and_restricted_ops():
    rng = random.Random(55)
    w = random_word(L10, 20, 10, rng, ops=("refl",))
    assert w.counts()["refl"] == 20
    assert sum(w.counts().values()) == 20
