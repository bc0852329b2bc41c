# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled pair scans for the common slot decision.

For each pair (v, w) of vectors with v < w (lexicographic index), the slot
condition holds iff

    rk L_v + rk L_w - rk [L_v | L_w]  ==  rk [L_v ; L_w] - rk (L_v - L_w)

where L_x = b(x, .).  The scans return the first failing pair in the index
range [lo, hi) of v, or None.  Both release the GIL while scanning.
"""

from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, free

cdef extern from *:
    int __builtin_clzll(unsigned long long) nogil



cdef inline int _rank64(uint64_t* rows, int k) noexcept nogil:
    cdef uint64_t basis[64]
    cdef int i, top, r = 0
    cdef uint64_t x
    for i in range(64):
        basis[i] = 0
    for i in range(k):
        x = rows[i]
        while x:
            top = 63 - __builtin_clzll(x)
            if basis[top] == 0:
                basis[top] = x
                r += 1
                break
            x ^= basis[top]
    return r


def slot_scan_gf2(list gram_bits, int n, int m, long lo, long hi):
    """``gram_bits[i*n + j]`` packs b(v_i, v_j) with bit k = coordinate k; m <= 31."""
    if m > 31 or n > 20:
        raise ValueError("gf2 kernel limited to m <= 31, n <= 20")
    cdef long N = 1 << n
    cdef uint64_t* L = <uint64_t*> malloc(N * n * sizeof(uint64_t))
    cdef int* rk = <int*> malloc(N * sizeof(int))
    cdef uint64_t* G = <uint64_t*> malloc(n * n * sizeof(uint64_t))
    cdef uint64_t buf[64]
    cdef long v, w, fv = -1, fw = -1
    cdef int i, j, dim_i, dim_d
    if L == NULL or rk == NULL or G == NULL:
        free(L); free(rk); free(G)
        raise MemoryError()
    for i in range(n * n):
        G[i] = <uint64_t> gram_bits[i]
    with nogil:
        for v in range(N):
            for j in range(n):
                L[v * n + j] = 0
            for i in range(n):
                # coordinate i is bit n-1-i of the index
                if (v >> (n - 1 - i)) & 1:
                    for j in range(n):
                        L[v * n + j] ^= G[i * n + j]
            rk[v] = _rank64(&L[v * n], n)
        for v in range(max(lo, 1), min(hi, N)):
            for w in range(v + 1, N):
                for j in range(n):
                    buf[j] = L[v * n + j]
                    buf[n + j] = L[w * n + j]
                dim_i = rk[v] + rk[w] - _rank64(buf, 2 * n)
                for j in range(n):
                    buf[j] = L[v * n + j] | (L[w * n + j] << m)
                dim_d = _rank64(buf, n)
                for j in range(n):
                    buf[j] = L[v * n + j] ^ L[w * n + j]
                dim_d -= _rank64(buf, n)
                if dim_d != dim_i:
                    fv = v
                    fw = w
                    break
            if fv >= 0:
                break
    free(L); free(rk); free(G)
    if fv < 0:
        return None
    return (fv, fw)


cdef int _rank_modp(int64_t* a, int rows, int cols, int p, int* inv) noexcept nogil:
    """Rank of the row-major rows x cols block ``a`` (destroyed)."""
    cdef int r = 0, c, i, k, piv
    cdef int64_t f, t
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if a[i * cols + c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for k in range(cols):
                t = a[r * cols + k]
                a[r * cols + k] = a[piv * cols + k]
                a[piv * cols + k] = t
        f = inv[a[r * cols + c]]
        for k in range(c, cols):
            a[r * cols + k] = (a[r * cols + k] * f) % p
        for i in range(r + 1, rows):
            f = a[i * cols + c]
            if f != 0:
                for k in range(c, cols):
                    a[i * cols + k] = (a[i * cols + k] - f * a[r * cols + k]) % p
                    if a[i * cols + k] < 0:
                        a[i * cols + k] += p
        r += 1
    return r


def slot_scan_modp(list gram_flat, int n, int m, int p, long lo, long hi):
    """``gram_flat[(i*n + j)*m + k]`` = coordinate k of b(v_i, v_j)."""
    cdef long N = 1
    cdef int i
    for i in range(n):
        N *= p
    cdef int64_t* G = <int64_t*> malloc(max(n * n * m, 1) * sizeof(int64_t))
    cdef int64_t* L = <int64_t*> malloc(max(N * m * n, 1) * sizeof(int64_t))
    cdef int* rk = <int*> malloc(N * sizeof(int))
    cdef int64_t* work = <int64_t*> malloc(max(2 * m * 2 * n, 1) * sizeof(int64_t))
    cdef int inv[8]
    cdef long v, w, x, fv = -1, fw = -1
    cdef int j, k, c, dim_i, dim_d
    cdef int64_t coef
    if G == NULL or L == NULL or rk == NULL or work == NULL:
        free(G); free(L); free(rk); free(work)
        raise MemoryError()
    for i in range(n * n * m):
        G[i] = <int64_t> gram_flat[i]
    for i in range(p):
        inv[i] = 0
    for i in range(1, p):
        for j in range(1, p):
            if (i * j) % p == 1:
                inv[i] = j
    with nogil:
        # L[v] is m x n row-major: L[v][k][j] = sum_i v_i b(v_i, v_j)_k
        for v in range(N):
            for k in range(m * n):
                L[v * m * n + k] = 0
            x = v
            for i in range(n - 1, -1, -1):
                coef = x % p
                x = x // p
                if coef:
                    for j in range(n):
                        for k in range(m):
                            L[v * m * n + k * n + j] += coef * G[(i * n + j) * m + k]
            for k in range(m * n):
                L[v * m * n + k] %= p
            for k in range(m * n):
                work[k] = L[v * m * n + k]
            rk[v] = _rank_modp(work, m, n, p, inv)
        for v in range(max(lo, 1), min(hi, N)):
            for w in range(v + 1, N):
                # [L_v | L_w]: m x 2n
                for k in range(m):
                    for j in range(n):
                        work[k * 2 * n + j] = L[v * m * n + k * n + j]
                        work[k * 2 * n + n + j] = L[w * m * n + k * n + j]
                dim_i = rk[v] + rk[w] - _rank_modp(work, m, 2 * n, p, inv)
                # [L_v ; L_w]: 2m x n
                for k in range(m * n):
                    work[k] = L[v * m * n + k]
                    work[m * n + k] = L[w * m * n + k]
                dim_d = _rank_modp(work, 2 * m, n, p, inv)
                for k in range(m * n):
                    c = <int> (L[v * m * n + k] - L[w * m * n + k])
                    work[k] = c + p if c < 0 else c
                dim_d -= _rank_modp(work, m, n, p, inv)
                if dim_d != dim_i:
                    fv = v
                    fw = w
                    break
            if fv >= 0:
                break
    free(G); free(L); free(rk); free(work)
    if fv < 0:
        return None
    return (fv, fw)
