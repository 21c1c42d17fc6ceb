"""Command-line interface: JSON in, JSON (or plain text) out.

Exit codes: 0 success, 1 domain error (serialized error object), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Callable, Optional

from . import __version__
from .decompose import SearchOptions, classify, decompose
from .errors import LatrefError, MalformedInput
from .k3 import FIXTURES, PellSolution, aut_trichotomy, binary_coefficients, pell, pell_isometry, verify_fixture
from .lattice import discriminant_group, disc_action, is_pm_on_disc, is_stable, signature
from .padic import local_membership, mod2_class
from .serialize import (
    isometry_to_json,
    lattice_to_json,
    parse_int,
    parse_isometry,
    parse_lattice,
    parse_matrix,
    to_jsonable,
)
from .transforms import cartan_dieudonne, compose, is_O_plus, order, spinor_norm, spinor_norm_twisted
from .words import GeneratorWord


class UsageError(Exception):
    pass


# -- input handling ---------------------------------------------------------------

def read_document(source: Optional[str]) -> Any:
    """Parse a JSON document given inline, as a path, or "-" for stdin."""
    if source is None:
        raise UsageError("an input document is required (inline JSON, a file path, or '-')")
    if source == "-":
        text = sys.stdin.read()
    elif source.lstrip().startswith(("{", "[")):
        text = source
    else:
        try:
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {source}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        err = MalformedInput(f"invalid JSON: {exc.msg}")
        err.position = {"line": exc.lineno, "column": exc.colno, "offset": exc.pos}
        raise err from None


def _require(doc: Any, key: str) -> Any:
    if not isinstance(doc, dict) or key not in doc:
        raise MalformedInput(f"input is missing '{key}'")
    return doc[key]


def _lattice_of(doc: Any):
    if isinstance(doc, dict) and "lattice" in doc:
        return parse_lattice(doc["lattice"])
    return parse_lattice(doc)


def _isometry_of(doc: Any, key: str = "isometry"):
    L = _lattice_of(doc)
    if isinstance(doc, dict) and "word" in doc and key not in doc:
        return GeneratorWord.from_json(L, doc["word"]).eval()
    return parse_isometry(L, _require(doc, key))


def _opts_of(doc: Any) -> SearchOptions:
    raw = doc.get("opts", {}) if isinstance(doc, dict) else {}
    if not isinstance(raw, dict):
        raise MalformedInput("opts must be an object")
    kw = {}
    for key in ("coeff_box", "max_steps"):
        if key in raw:
            kw[key] = parse_int(raw[key], f"opts.{key}")
    if "escalation" in raw:
        kw["escalation"] = tuple(parse_int(x, "opts.escalation") for x in raw["escalation"])
    if "use_huybrechts" in raw:
        kw["use_huybrechts"] = bool(raw["use_huybrechts"])
    try:
        return SearchOptions(**kw)
    except ValueError as exc:
        raise MalformedInput(str(exc)) from None


# -- subcommand bodies ----------------------------------------------------------------

def cmd_lattice_info(args) -> dict:
    L = _lattice_of(read_document(args.input))
    A = discriminant_group(L)
    m2 = mod2_class(L)
    out = {
        "lattice": lattice_to_json(L),
        "rank": L.rank,
        "det": L.det,
        "signature": list(signature(L)),
        "discriminant": {"invariant_factors": list(A.invariant_factors), "order": A.order},
        "mod2": {**m2.__dict__, "name": m2.name},
    }
    return out


def cmd_isometry_verify(args) -> dict:
    g = _isometry_of(read_document(args.input))
    return {"valid": True, "det": g.det, "is_identity": g.is_identity}


def cmd_isometry_compose(args) -> dict:
    doc = read_document(args.input)
    L = _lattice_of(doc)
    items = _require(doc, "isometries")
    if not isinstance(items, list) or not items:
        raise MalformedInput("'isometries' must be a nonempty list")
    gs = [parse_isometry(L, d) for d in items]
    g = gs[0]
    for h in gs[1:]:
        g = compose(g, h)
    return isometry_to_json(g)


def cmd_isometry_order(args) -> dict:
    r = order(_isometry_of(read_document(args.input)), cap=args.cap)
    return {"kind": r.kind, "n": r.n}


def cmd_spinor(args) -> dict:
    g = _isometry_of(read_document(args.input))
    return {
        "spinor_norm": spinor_norm(g).value,
        "spinor_norm_twisted": spinor_norm_twisted(g).value,
        "O_plus": is_O_plus(g),
        "det": g.det,
        "cartan_dieudonne": [[str(c) for c in v] for v in cartan_dieudonne(g)],
    }


def cmd_disc_action(args) -> dict:
    g = _isometry_of(read_document(args.input))
    L = g.lattice
    A = discriminant_group(L)
    pm = is_pm_on_disc(L, g)
    return {
        "invariant_factors": list(A.invariant_factors),
        "action": [list(r) for r in disc_action(L, g, A)],
        "stable": is_stable(L, g),
        "pm": {1: "+1", -1: "-1", 0: "neither"}[pm] if A.order > 1 else "+1",
    }


def cmd_decompose_run(args) -> dict:
    doc = read_document(args.input)
    return decompose(_isometry_of(doc), _opts_of(doc)).to_json()


def cmd_decompose_classify(args) -> dict:
    doc = read_document(args.input)
    flags = classify(_isometry_of(doc), _opts_of(doc))
    w = flags["in_W_witness"]
    flags["in_W_witness"] = None if w is None else w.to_json()
    return flags


def cmd_local_verdict(args) -> dict:
    doc = read_document(args.input)
    g = _isometry_of(doc)
    p = args.p if args.p is not None else parse_int(_require(doc, "p"), "p")
    return local_membership(g.lattice, g, p).to_json()


def cmd_pell_solve(args) -> dict:
    D = args.D
    if D is None:
        D = parse_int(_require(read_document(args.input), "D"), "D")
    s = pell(D)
    return {"D": s.D, "alpha": s.alpha, "beta": s.beta}


def cmd_pell_isometry(args) -> dict:
    if args.input is not None:
        doc = read_document(args.input)
        a, b, c = binary_coefficients(parse_matrix(_require(doc, "ns_gram"), "ns_gram"))
        sol = doc.get("solution")
    else:
        if None in (args.a, args.b, args.c):
            raise UsageError("give --a --b --c or an input document")
        a, b, c, sol = args.a, args.b, args.c, None
    D = b * b - 4 * a * c
    if sol is not None:
        solution = PellSolution(D, parse_int(sol.get("alpha"), "alpha"), parse_int(sol.get("beta"), "beta"))
    elif args.alpha is not None and args.beta is not None:
        solution = PellSolution(D, args.alpha, args.beta)
    else:
        solution = pell(D)
    g = pell_isometry(a, b, c, solution)
    from .linalg import trace
    return {**isometry_to_json(g), "D": D, "alpha": solution.alpha, "beta": solution.beta,
            "det": g.det, "trace": trace(g.matrix)}


def cmd_aut_classify(args) -> dict:
    doc = read_document(args.input)
    gram = doc.get("ns_gram", doc.get("gram")) if isinstance(doc, dict) else doc
    if gram is None:
        raise MalformedInput("input is missing 'ns_gram'")
    return aut_trichotomy(parse_matrix(gram, "ns_gram")).to_json()


def cmd_fixture_verify(args) -> dict:
    if args.name == "all":
        reports = {name: verify_fixture(name) for name in FIXTURES}
        return {"status": "pass", "fixtures": reports}
    return verify_fixture(args.name)


# -- argument parsing -----------------------------------------------------------------

def _add_input(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("input", nargs=None if required else "?",
                   help="JSON document, path to a JSON file, or '-' for stdin")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="latref", description="Exact computations in orthogonal groups of even lattices.")
    parser.add_argument("--output", choices=("json", "text"), default="json")
    parser.add_argument("--version", action="version", version=f"latref {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def group(name: str, help_: str):
        p = sub.add_parser(name, help=help_)
        return p.add_subparsers(dest="action", required=True)

    def leaf(subparsers, name: str, fn: Callable, help_: str, input_required: bool = True):
        p = subparsers.add_parser(name, help=help_)
        _add_input(p, input_required)
        p.set_defaults(func=fn)
        return p

    g = group("lattice", "lattice invariants")
    leaf(g, "info", cmd_lattice_info, "rank, determinant, signature, discriminant group, mod-2 class")

    g = group("isometry", "isometry checks")
    leaf(g, "verify", cmd_isometry_verify, "check that a matrix preserves the Gram form")
    leaf(g, "compose", cmd_isometry_compose, "compose a list of isometries left to right")
    p = leaf(g, "order", cmd_isometry_order, "exact order")
    p.add_argument("--cap", type=int, default=1000)

    p = sub.add_parser("spinor", help="spinor norms and orientation")
    _add_input(p)
    p.set_defaults(func=cmd_spinor)

    g = group("disc", "discriminant group")
    leaf(g, "action", cmd_disc_action, "induced action on the discriminant group")

    g = group("decompose", "Wall reduction")
    leaf(g, "run", cmd_decompose_run, "decompose into reflexive involutions")
    leaf(g, "classify", cmd_decompose_classify, "membership flags and witnesses")

    g = group("local", "local verdicts")
    p = leaf(g, "verdict", cmd_local_verdict, "local membership at a prime")
    p.add_argument("--p", type=int, default=None)

    g = group("pell", "Pell equation x^2 - D y^2 = 4")
    p = leaf(g, "solve", cmd_pell_solve, "fundamental solution", input_required=False)
    p.add_argument("--D", type=int, default=None)
    p = leaf(g, "isometry", cmd_pell_isometry, "isometry of a rank-2 form from a Pell solution", input_required=False)
    for flag in ("--a", "--b", "--c", "--alpha", "--beta"):
        p.add_argument(flag, type=int, default=None)

    g = group("aut", "Picard-rank-2 automorphism type")
    leaf(g, "classify", cmd_aut_classify, "Finite / InfiniteDihedral / InfiniteCyclic")

    g = group("fixture", "built-in reference examples")
    p = g.add_parser("verify", help="verify a built-in fixture")
    p.add_argument("name", choices=FIXTURES + ("all",))
    p.set_defaults(func=cmd_fixture_verify)
    return parser


# -- output ---------------------------------------------------------------------

def _text(obj: Any, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _is_flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_flat(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(f"{pad}- {_flat(v)}" if _is_flat(v) else _text(v, indent + 1) for v in obj)
    return f"{pad}{_flat(obj)}"


def _is_flat(v: Any) -> bool:
    if isinstance(v, dict):
        return False
    if isinstance(v, list):
        return all(isinstance(x, (int, str, bool)) or x is None or
                   (isinstance(x, list) and all(not isinstance(y, (list, dict)) for y in x)) for x in v)
    return True


def _flat(v: Any) -> str:
    if isinstance(v, list):
        return json.dumps(v)
    if v is None:
        return "-"
    return str(v).lower() if isinstance(v, bool) else str(v)


def emit(obj: Any, fmt: str, stream) -> None:
    data = to_jsonable(obj)
    if fmt == "json":
        stream.write(json.dumps(data, sort_keys=False) + "\n")
    else:
        stream.write(_text(data) + "\n")


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"latref: error: {exc}\n")
        return 2
    except LatrefError as exc:
        err = exc.to_json()
        if getattr(exc, "position", None):
            err["position"] = exc.position
        emit(err, args.output, sys.stdout)
        return 1
    except (ValueError, ArithmeticError) as exc:
        emit({"error": type(exc).__name__, "message": str(exc)}, args.output, sys.stdout)
        return 1
    emit(result, args.output, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
