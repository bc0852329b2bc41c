"""Backend selection for the hot pair scans.

The compiled extension is used when importable; ``QGK_PURE=1`` forces the
pure-Python implementation.  ``BACKEND`` names the active one.
"""

from __future__ import annotations

import os

from . import _pykernels

try:
    if os.environ.get("QGK_PURE"):
        raise ImportError("QGK_PURE set")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"

# the compiled gf2 scan packs stacked columns of 2m bits into 64-bit words
_GF2_MAX_M = 31


def slot_scan(p: int, n: int, m: int, gram, lo: int, hi: int, backend: str | None = None):
    """First pair (v, w), v in [lo, hi), w > v, violating the slot rank identity.

    ``gram`` is the nested n x n x m Gram table of the map.
    """
    impl = _pick(backend)
    if p == 2:
        bits = [sum(1 << k for k, c in enumerate(gram[i][j]) if c) for i in range(n) for j in range(n)]
        if impl is _compiled and m > _GF2_MAX_M:
            impl = _pykernels
        return impl.slot_scan_gf2(bits, n, m, lo, hi)
    flat = [c for i in range(n) for j in range(n) for c in gram[i][j]]
    return impl.slot_scan_modp(flat, n, m, p, lo, hi)


def _pick(backend):
    if backend is None:
        return _compiled if _compiled is not None else _pykernels
    if backend == "python":
        return _pykernels
    if backend == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return _compiled
    raise ValueError(f"unknown backend {backend!r}")


def available_backends() -> list[str]:
    return ["python"] + (["compiled"] if _compiled is not None else [])
