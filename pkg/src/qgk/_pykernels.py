"""Pure-Python twins of the compiled pair scans in ``_kernels.pyx``.

Same signatures, same pair order, same results; used when the extension is
unavailable or ``QGK_PURE`` is set.
"""

from __future__ import annotations

from .fpla import rank_gf2, rank_rows


def slot_scan_gf2(gram_bits, n, m, lo, hi):
    N = 1 << n
    L = []
    for v in range(N):
        cols = [0] * n
        for i in range(n):
            if (v >> (n - 1 - i)) & 1:
                for j in range(n):
                    cols[j] ^= gram_bits[i * n + j]
        L.append(cols)
    rk = [rank_gf2(c) for c in L]
    for v in range(max(lo, 1), min(hi, N)):
        Lv = L[v]
        for w in range(v + 1, N):
            Lw = L[w]
            dim_i = rk[v] + rk[w] - rank_gf2(Lv + Lw)
            dim_d = rank_gf2([a | (b << m) for a, b in zip(Lv, Lw)]) - rank_gf2([a ^ b for a, b in zip(Lv, Lw)])
            if dim_d != dim_i:
                return (v, w)
    return None


def slot_scan_modp(gram_flat, n, m, p, lo, hi):
    N = p**n
    L = []
    for v in range(N):
        rows = [[0] * n for _ in range(m)]
        x = v
        for i in range(n - 1, -1, -1):
            coef = x % p
            x //= p
            if coef:
                for j in range(n):
                    base = (i * n + j) * m
                    for k in range(m):
                        rows[k][j] += coef * gram_flat[base + k]
        L.append([[c % p for c in r] for r in rows])
    rk = [rank_rows(p, Lv, n) for Lv in L]
    for v in range(max(lo, 1), min(hi, N)):
        Lv = L[v]
        for w in range(v + 1, N):
            Lw = L[w]
            dim_i = rk[v] + rk[w] - rank_rows(p, [a + b for a, b in zip(Lv, Lw)], 2 * n)
            dim_d = rank_rows(p, Lv + Lw, n) - rank_rows(
                p, [[(x - y) % p for x, y in zip(a, b)] for a, b in zip(Lv, Lw)], n
            )
            if dim_d != dim_i:
                return (v, w)
    return None
