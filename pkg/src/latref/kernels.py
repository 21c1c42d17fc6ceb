"""Backend selection for the hot enumeration/scoring kernels.

The compiled extension ``latref._kernels`` is used when it imports and the
inputs provably fit in int64; otherwise the pure-Python twin runs.  Set
``LATREF_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

_LIMIT = 1 << 62

try:
    if os.environ.get("LATREF_PURE_PYTHON"):
        raise ImportError("pure-Python backend requested")
    from . import _kernels as _compiled  # type: ignore[attr-defined]
except ImportError:
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"


def _max_abs(rows) -> int:
    return max((abs(x) for r in rows for x in r), default=0)


def box_vectors(gram, target2: int, box: int, backend: str | None = None):
    n = len(gram)
    impl = _pick(backend)
    if impl is _compiled and 4 * n * n * _max_abs(gram) * box * box + abs(target2) >= _LIMIT:
        impl = _kernels_py
    return impl.box_vectors(gram, target2, box)


def split_vectors(sigma_gram, target_q: int, box: int, backend: str | None = None):
    s = len(sigma_gram)
    impl = _pick(backend)
    if impl is _compiled and 4 * (s * s + 1) * (_max_abs(sigma_gram) + 1) * box * box + abs(target_q) >= _LIMIT:
        impl = _kernels_py
    return impl.split_vectors(sigma_gram, target_q, box)


def argmin_height(Re, Rf, x, backend: str | None = None):
    if not Re:
        return -1, None
    impl = _pick(backend)
    if impl is _compiled:
        bound = 2 * len(x) * max(_max_abs(Re), _max_abs(Rf)) * max((abs(c) for c in x), default=0)
        if bound >= _LIMIT:
            impl = _kernels_py
    return impl.argmin_height(Re, Rf, x)


def _pick(backend):
    if backend == "python" or _compiled is None:
        return _kernels_py
    return _compiled
