# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the routines in ``_kernels_py``."""

from libc.stdlib cimport malloc, free
from libc.string cimport memcpy
from libc.stdint cimport uint64_t, int64_t

BACKEND = "cython"


cdef extern from *:
    int __builtin_clzll(unsigned long long x) nogil


cdef inline Py_ssize_t _top_bit(uint64_t *row, Py_ssize_t top_word) nogil:
    """Index of the highest set bit in words 0..top_word, or -1."""
    cdef Py_ssize_t w = top_word
    while w >= 0:
        if row[w]:
            return w * 64 + 63 - __builtin_clzll(row[w])
        w -= 1
    return -1


def gf2_rank(rows):
    """Rank over GF(2) of rows given as int bitmasks.

    Rows are reduced one at a time against a table of pivot rows indexed by
    their leading bit, the same scheme as the Python fallback but on packed
    64-bit words.
    """
    cdef Py_ssize_t nrows = len(rows)
    if nrows == 0:
        return 0
    cdef Py_ssize_t width = 0
    for r in rows:
        if r.bit_length() > width:
            width = r.bit_length()
    if width == 0:
        return 0
    cdef Py_ssize_t words = (width + 63) // 64
    cdef uint64_t *mat = <uint64_t *> malloc(nrows * words * sizeof(uint64_t))
    cdef Py_ssize_t *pivot = <Py_ssize_t *> malloc(width * sizeof(Py_ssize_t))
    if mat == NULL or pivot == NULL:
        free(mat); free(pivot)
        raise MemoryError()
    cdef Py_ssize_t i, j, w, top, prow
    cdef Py_ssize_t rank = 0
    cdef uint64_t *cur
    cdef uint64_t *other
    cdef bytes packed
    cdef Py_ssize_t nbytes = words * 8
    try:
        for j in range(width):
            pivot[j] = -1
        for i in range(nrows):
            cur = mat + rank * words
            # little-endian bytes give the words in order on little-endian hosts
            packed = (<object> rows[i]).to_bytes(nbytes, "little")
            memcpy(cur, <char *> packed, nbytes)
            top = _top_bit(cur, words - 1)
            while top >= 0:
                prow = pivot[top]
                if prow < 0:
                    pivot[top] = rank
                    rank += 1
                    break
                other = mat + prow * words
                for w in range(top // 64 + 1):
                    cur[w] ^= other[w]
                top = _top_bit(cur, top // 64)
    finally:
        free(mat)
        free(pivot)
    return rank


cdef int64_t _det_mod_p(int64_t *a, int n, int64_t p):
    cdef int c, r, k, piv
    cdef int64_t det = 1, pv, inv, f, t, e, base
    for c in range(n):
        piv = -1
        for r in range(c, n):
            if a[r * n + c] != 0:
                piv = r
                break
        if piv < 0:
            return 0
        if piv != c:
            for k in range(n):
                t = a[c * n + k]
                a[c * n + k] = a[piv * n + k]
                a[piv * n + k] = t
            det = (p - det) % p
        pv = a[c * n + c]
        det = det * pv % p
        # modular inverse by Fermat
        inv = 1
        base = pv
        e = p - 2
        while e > 0:
            if e & 1:
                inv = inv * base % p
            base = base * base % p
            e >>= 1
        for r in range(c + 1, n):
            f = a[r * n + c]
            if f != 0:
                f = f * inv % p
                for k in range(c, n):
                    a[r * n + k] = (a[r * n + k] - f * a[c * n + k]) % p
                    if a[r * n + k] < 0:
                        a[r * n + k] += p
    return det


def unimodular_mod_primes(A, masks, primes):
    """Index of the first column subset whose determinant is not +-1, or -1."""
    cdef int m = len(A)
    if m == 0:
        return -1
    cdef int ncols = len(A[0])
    cdef int64_t *src = <int64_t *> malloc(m * ncols * sizeof(int64_t))
    cdef int64_t *work = <int64_t *> malloc(m * m * sizeof(int64_t))
    cdef int *cols = <int *> malloc(m * sizeof(int))
    if src == NULL or work == NULL or cols == NULL:
        free(src); free(work); free(cols)
        raise MemoryError()
    cdef int r, k, cnt, j
    cdef int64_t p, d, s, sign, v
    plist = [int(q) for q in primes]
    try:
        for r in range(m):
            row = A[r]
            for j in range(ncols):
                src[r * ncols + j] = <int64_t> int(row[j])
        for idx, mask in enumerate(masks):
            cnt = 0
            j = 0
            mm = int(mask)
            while mm:
                if mm & 1:
                    if cnt >= m:
                        return idx
                    cols[cnt] = j
                    cnt += 1
                mm >>= 1
                j += 1
            if cnt != m:
                return idx
            sign = 0
            for q in plist:
                p = q
                for r in range(m):
                    for k in range(m):
                        v = src[r * ncols + cols[k]] % p
                        if v < 0:
                            v += p
                        work[r * m + k] = v
                d = _det_mod_p(work, m, p)
                if d == 1:
                    s = 1
                elif d == p - 1:
                    s = -1
                else:
                    return idx
                if sign == 0:
                    sign = s
                elif s != sign:
                    return idx
        return -1
    finally:
        free(src)
        free(work)
        free(cols)
