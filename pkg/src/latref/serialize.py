"""JSON interchange: lattices, vectors and isometries with bigint-safe integers.

Integers whose absolute value exceeds 2^53 are written as decimal strings;
readers accept either form.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from .errors import MalformedInput
from .lattice import Lattice, Splitting, lattice_L, make_lattice
from .transforms import Isometry, make_isometry

SAFE_INT = 2 ** 53


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, float)):
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) > SAFE_INT else obj
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else to_jsonable(obj.numerator)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "to_json"):
        return to_jsonable(obj.to_json())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def parse_int(x: Any, what: str = "value") -> int:
    if isinstance(x, bool):
        raise MalformedInput(f"{what}: expected an integer, got a boolean")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x.strip(), 10)
        except ValueError:
            pass
    raise MalformedInput(f"{what}: expected an integer or decimal string, got {x!r}")


def parse_vector(x: Any, what: str = "vector") -> tuple[int, ...]:
    if not isinstance(x, list):
        raise MalformedInput(f"{what}: expected a list of integers")
    return tuple(parse_int(c, what) for c in x)


def parse_matrix(x: Any, what: str = "matrix") -> tuple[tuple[int, ...], ...]:
    if not isinstance(x, list) or not x:
        raise MalformedInput(f"{what}: expected a nonempty list of rows")
    return tuple(parse_vector(r, what) for r in x)


def lattice_to_json(L: Lattice) -> dict:
    out: dict = {"gram": [list(r) for r in L.gram]}
    if L.label:
        out["label"] = L.label
    if L.splitting is not None:
        sp = L.splitting
        out["splitting"] = {"e": sp.e, "f": sp.f, "sigma": list(sp.sigma), "sign": sp.sign}
    return out


def parse_lattice(d: Any) -> Lattice:
    """Lattice from {"gram": ..., "label"?: ..., "splitting"?: {...}} or {"family": "L", "n": n}."""
    if not isinstance(d, dict):
        raise MalformedInput("lattice: expected an object")
    if d.get("family") == "L":
        return lattice_L(parse_int(d.get("n"), "lattice.n"))
    if "gram" not in d:
        raise MalformedInput("lattice: missing 'gram'")
    gram = parse_matrix(d["gram"], "lattice.gram")
    label = d.get("label")
    sp = d.get("splitting")
    splitting = None
    if sp is not None:
        if not isinstance(sp, dict) or "e" not in sp or "f" not in sp:
            raise MalformedInput("lattice.splitting: expected {'e': i, 'f': j}")
        e, f = parse_int(sp["e"], "splitting.e"), parse_int(sp["f"], "splitting.f")
        sigma = sp.get("sigma")
        sigma = tuple(i for i in range(len(gram)) if i not in (e, f)) if sigma is None \
            else parse_vector(sigma, "splitting.sigma")
        splitting = Splitting(e, f, sigma, parse_int(sp.get("sign", 1), "splitting.sign"))
    return make_lattice(gram, label=label, splitting=splitting)


def isometry_to_json(g: Isometry) -> dict:
    return {"matrix": [list(r) for r in g.matrix]}


def parse_isometry(L: Lattice, d: Any) -> Isometry:
    if isinstance(d, dict) and "matrix" in d:
        return make_isometry(L, parse_matrix(d["matrix"], "isometry.matrix"))
    if isinstance(d, list):
        return make_isometry(L, parse_matrix(d, "isometry"))
    raise MalformedInput("isometry: expected {'matrix': [[...], ...]}")
