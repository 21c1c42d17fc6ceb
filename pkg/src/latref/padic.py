"""Local invariants: mod-2 form classes and local generation verdicts.

Verdicts are assembled only from sufficient conditions (local generation
theorems for reflections and reflexive involutions) plus explicit witnesses
of non-membership.  ``"not_certified"`` is an honest outcome.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from itertools import product
from typing import Optional

from . import linalg
from .errors import HypothesisUnverifiable, NotTwiceEven
from .lattice import Lattice, discriminant_group, is_stable_at
from .squares import LocalSquareClass, hilbert, square_class_p  # noqa: F401  (re-exported)
from .transforms import Isometry, apply, spinor_norm

# tags used in verdict reasons
TAG_IDENTITY = "identity"
TAG_DISC = "disc-action"
TAG_DET = "determinant"
TAG_SPIN = "spinor-norm"
TAG_R_STABLE = "kneser:R(Lp)=O~(Lp)"
TAG_RPM = "kneser:R(Lp)&SO+=Rpm(Lp)"
TAG_W_STABLE = "eichler-wall:W(Lp)=O~(Lp)"
TAG_WPM = "eichler-wall:Wpm(Lp)=SO~dagger(Lp)"
TAG_MOD2 = "mod2-witness:g(e-f)!=e-f"


# -- mod-2 quadratic forms ---------------------------------------------------------

NORMAL_FORMS = {
    (False, 0): "0",
    (True, 0): "x1^2",
    (False, 2): "x1x2",
    (True, 2): "x1^2+x2x3",
    (False, 4): "x1x2+x3x4",
    (True, 4): "x1^2+x2x3+x4x5",
}


@dataclass(frozen=True)
class F2FormClass:
    """Isomorphism type of q mod 2 on L/2L.

    When q is nonzero on the polar radical the Arf invariant of a regular
    complement is not an invariant of the form and is reported as 0.
    """

    ambient_rank: int
    radical_dim: int
    radical_q_nonzero: bool
    regular_rank: int
    arf: int

    @property
    def name(self) -> Optional[str]:
        """Normal-form label among the forms the generation theorems exclude, if any."""
        if self.arf:
            return None
        return NORMAL_FORMS.get((self.radical_q_nonzero, self.regular_rank))


def _f2_kernel(rows: list[int], n: int) -> list[int]:
    """Kernel of a symmetric F2 matrix given as bitmask rows."""
    pivots: dict[int, tuple[int, int]] = {}
    kernel = []
    for i in range(n):
        r, tag = rows[i], 1 << i
        while r:
            col = r.bit_length() - 1
            if col not in pivots:
                pivots[col] = (r, tag)
                break
            pr, pt = pivots[col]
            r ^= pr
            tag ^= pt
        else:
            kernel.append(tag)
    return kernel


def _q_mod2(L: Lattice, x: int) -> int:
    G = L.gram
    n = L.rank
    idx = [i for i in range(n) if x >> i & 1]
    val = sum(G[i][i] // 2 for i in idx)
    val += sum(G[i][j] for a, i in enumerate(idx) for j in idx[a + 1:])
    return val & 1


def _b_mod2(L: Lattice, x: int, y: int) -> int:
    G = L.gram
    n = L.rank
    return sum(G[i][j] for i in range(n) if x >> i & 1 for j in range(n) if y >> j & 1) & 1


def _arf_exhaustive(L: Lattice, basis: list[int]) -> int:
    m = len(basis)
    ones = 0
    for bits in product((0, 1), repeat=m):
        x = 0
        for b, v in zip(bits, basis):
            if b:
                x ^= v
        ones += _q_mod2(L, x)
    return 1 if ones > 2 ** (m - 1) else 0


def _arf_symplectic(L: Lattice, basis: list[int]) -> int:
    vecs = list(basis)
    arf = 0
    while vecs:
        a = vecs.pop(0)
        k = next(i for i, v in enumerate(vecs) if _b_mod2(L, a, v))
        b = vecs.pop(k)
        arf ^= _q_mod2(L, a) & _q_mod2(L, b)
        vecs = [v ^ (a if _b_mod2(L, v, b) else 0) ^ (b if _b_mod2(L, v, a) else 0) for v in vecs]
    return arf


def mod2_class(L: Lattice, method: str = "auto") -> F2FormClass:
    n = L.rank
    rows = [sum((L.gram[i][j] & 1) << j for j in range(n)) for i in range(n)]
    radical = _f2_kernel(rows, n)
    rdim = len(radical)
    rq = any(_q_mod2(L, r) for r in radical)
    # complement of the radical: extend the radical to a basis greedily
    span = {}

    def insert(v):
        for col in sorted(span, reverse=True):
            if v >> col & 1:
                v ^= span[col]
        if v:
            span[v.bit_length() - 1] = v
            return True
        return False

    for r in radical:
        insert(r)
    complement = [1 << i for i in range(n) if insert(1 << i)]
    reg = len(complement)
    if rq or reg == 0:
        arf = 0
    elif method == "exhaustive" or (method == "auto" and reg <= 8):
        arf = _arf_exhaustive(L, complement)
    else:
        arf = _arf_symplectic(L, complement)
    return F2FormClass(n, rdim, rq, reg, arf)


# -- witnesses and verdicts -----------------------------------------------------------

def _check_twice_even(L: Lattice):
    sp = L.require_splitting()
    for a, i in enumerate(sp.sigma):
        for j in sp.sigma[a:]:
            x = L.gram[i][j]
            if (i == j and x % 4) or (i != j and x % 2):
                raise NotTwiceEven("sigma block is not twice an even lattice")
    return sp


def mod2_fix_witness(L: Lattice, g: Isometry) -> bool:
    """Whether g(e - f) = e - f mod 2L on U + sigma(2).

    Every reflection in a vector with q = +-1 has this property, so False
    certifies that g is not a product of such reflections.
    """
    sp = _check_twice_even(L)
    w = [0] * L.rank
    w[sp.e], w[sp.f] = 1, -1
    img = apply(g, w)
    return all((a - b) % 2 == 0 for a, b in zip(img, w))


SEARCH_VOLUME = 2 * 10 ** 7


def has_unit_vectors(L: Lattice, box: int = 16) -> bool:
    """Bounded search for vectors with q = 1 and q = -1.

    The box is shrunk until the enumerated volume stays under SEARCH_VOLUME;
    a miss is reported as False, never as a proof of absence.
    """
    from .vectors import short_vectors
    free = len(L.splitting.sigma) if L.splitting is not None and L.splitting.sign == 1 else L.rank
    while box > 1 and (2 * box + 1) ** free > SEARCH_VOLUME:
        box -= 1
    return bool(short_vectors(L, 1, box)) and bool(short_vectors(L, -1, box))


@dataclass(frozen=True)
class LocalVerdict:
    prime: int
    in_R_local: str
    in_W_local: str
    reason: str
    in_R_pm_local: str = "not_certified"
    in_W_pm_local: str = "not_certified"
    mod2_witness: Optional[bool] = None
    reasons: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        out = asdict(self)
        out["p"] = out.pop("prime")
        return out


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p ** 0.5) + 1))


def local_membership(L: Lattice, g: Isometry, p: int, box: int = 16,
                     want_w: Optional[bool] = None) -> LocalVerdict:
    """Local membership of g in R(L_p), W(L_p) and their spinor-kernel parts.

    W-clauses need a designated U-splitting; ``want_w=None`` evaluates them
    only when one is present, ``want_w=True`` raises MissingSplitting otherwise.
    """
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if want_w:
        require_split(L)
    if g.is_identity:
        return LocalVerdict(p, "yes", "yes", TAG_IDENTITY, "yes", "yes",
                            reasons={k: TAG_IDENTITY for k in ("R", "W", "Rpm", "Wpm")})
    split = L.splitting is not None and L.splitting.sign == 1 and want_w is not False
    stable = is_stable_at(L, g, p)
    det = g.det
    spin_ok = spinor_norm(g).local(p).is_trivial
    reasons = {}

    # reflections: R(L_p) = stable group unless q mod 2 is x1x2 or x1x2+x3x4
    if not stable:
        in_R, reasons["R"] = "no", TAG_DISC
    else:
        if not has_unit_vectors(L, box):
            raise HypothesisUnverifiable("no vectors with q = 1 and q = -1 found in the search box")
        form = mod2_class(L).name if p == 2 else None
        if p != 2 or form not in ("x1x2", "x1x2+x3x4"):
            in_R, reasons["R"] = "yes", TAG_R_STABLE
        else:
            in_R, reasons["R"] = "not_certified", f"mod2 form {form}"

    # R+-: additionally det 1, spinor norm trivial at p, and q mod 2 not x1^2 at p = 2
    if in_R == "no":
        in_Rpm, reasons["Rpm"] = "no", reasons["R"]
    elif det != 1:
        in_Rpm, reasons["Rpm"] = "no", TAG_DET
    elif not spin_ok:
        in_Rpm, reasons["Rpm"] = "no", TAG_SPIN
    elif in_R == "yes" and (p != 2 or mod2_class(L).name != "x1^2"):
        in_Rpm, reasons["Rpm"] = "yes", TAG_RPM
    else:
        in_Rpm, reasons["Rpm"] = "not_certified", reasons["R"]

    witness = None
    if split:
        try:
            witness = mod2_fix_witness(L, g)
        except NotTwiceEven:
            witness = None
        if not stable:
            in_W, reasons["W"] = "no", TAG_DISC
        else:
            in_W, reasons["W"] = "yes", TAG_W_STABLE
        if in_W == "no":
            in_Wpm, reasons["Wpm"] = "no", TAG_DISC
        elif det != 1:
            in_Wpm, reasons["Wpm"] = "no", TAG_DET
        elif not spin_ok:
            in_Wpm, reasons["Wpm"] = "no", TAG_SPIN
        else:
            in_Wpm, reasons["Wpm"] = "yes", TAG_WPM
    else:
        in_W = in_Wpm = "not_certified"
        reasons["W"] = reasons["Wpm"] = "no U-splitting designated"
    if witness is False and in_R != "no":
        reasons["R"] = TAG_MOD2
        reasons["Rpm"] = TAG_MOD2
    return LocalVerdict(p, in_R, in_W, reasons["W"] if split else reasons["R"],
                        in_Rpm, in_Wpm, witness, reasons)


def require_split(L: Lattice) -> None:
    from .errors import MissingSplitting
    if L.splitting is None or L.splitting.sign != 1:
        raise MissingSplitting("W-clauses need a designated U-splitting")
