"""Pure-Python reference versions of the hot kernels in ``_kernels.pyx``.

Same signatures and output order as the compiled module; selected at import
time by :mod:`latref.kernels` when the extension is unavailable.
"""

from itertools import product


def box_vectors(gram, target2, box):
    """Vectors v in [-box, box]^n with v^T G v == target2.

    Only sign representatives (first nonzero coordinate positive) are kept;
    output is in increasing lexicographic order.
    """
    n = len(gram)
    out = []
    rng = range(-box, box + 1)
    for v in product(rng, repeat=n):
        first = next((c for c in v if c), 0)
        if first <= 0:
            continue
        w = [sum(gram[i][j] * v[j] for j in range(n)) for i in range(n)]
        if sum(a * b for a, b in zip(v, w)) == target2:
            out.append(v)
    return out


def split_vectors(sigma_gram, target_q, box):
    """Triples (a, b, z) with a*b + q_sigma(z) == target_q, all entries in [-box, box].

    Returned as flat tuples (a, b, z_1, ..., z_s), unsorted, both signs.
    """
    s = len(sigma_gram)
    out = []
    rng = range(-box, box + 1)
    for z in product(rng, repeat=s):
        val2 = sum(z[i] * sigma_gram[i][j] * z[j] for i in range(s) for j in range(s))
        m = target_q - val2 // 2
        if m == 0:
            for t in rng:
                out.append((t, 0) + z)
                if t:
                    out.append((0, t) + z)
        elif abs(m) <= box * box:
            for a in range(1, box + 1):
                if m % a == 0 and abs(m // a) <= box:
                    out.append((a, m // a) + z)
                    out.append((-a, -(m // a)) + z)
    return out


def argmin_height(Re, Rf, x):
    """Index minimizing |Re_k . x| + |Rf_k . x| (first on ties) and that minimum."""
    best, best_h = -1, None
    for k in range(len(Re)):
        re, rf = Re[k], Rf[k]
        h = abs(sum(a * b for a, b in zip(re, x))) + abs(sum(a * b for a, b in zip(rf, x)))
        if best_h is None or h < best_h:
            best, best_h = k, h
    return best, best_h
