"""Pure-Python versions of the hot loops.

The compiled module ``_ckernels`` provides the same functions with the same
semantics; ``kernels`` picks one at import time.
"""

from __future__ import annotations

from typing import Sequence

BACKEND = "python"


def gf2_rank(rows: Sequence[int]) -> int:
    """Rank over GF(2) of rows given as int bitmasks."""
    basis: dict[int, int] = {}
    rank = 0
    for r in rows:
        while r:
            top = r.bit_length() - 1
            piv = basis.get(top)
            if piv is None:
                basis[top] = r
                rank += 1
                break
            r ^= piv
    return rank


def det_mod_p(M: list[list[int]], p: int) -> int:
    """Determinant of a square integer matrix modulo a prime, in [0, p)."""
    n = len(M)
    a = [[x % p for x in row] for row in M]
    det = 1
    for c in range(n):
        piv = -1
        for r in range(c, n):
            if a[r][c]:
                piv = r
                break
        if piv < 0:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = p - det if det else 0
        pv = a[c][c]
        det = det * pv % p
        inv = pow(pv, p - 2, p)
        rowc = a[c]
        for r in range(c + 1, n):
            f = a[r][c]
            if f:
                f = f * inv % p
                row = a[r]
                for k in range(c, n):
                    row[k] = (row[k] - f * rowc[k]) % p
    return det


def unimodular_mod_primes(A: Sequence[Sequence[int]], masks: Sequence[int], primes: Sequence[int]) -> int:
    """Index of the first column subset whose determinant is not +-1, or -1.

    ``masks`` select ``m`` columns of the ``m x n`` matrix ``A``.  The caller
    supplies primes whose product exceeds the Hadamard bound plus one, so a
    determinant congruent to the same sign modulo every prime equals it.
    """
    m = len(A)
    for idx, mask in enumerate(masks):
        cols = [j for j in range(mask.bit_length()) if mask >> j & 1]
        if len(cols) != m:
            return idx
        M = [[A[r][j] for j in cols] for r in range(m)]
        sign = 0
        for p in primes:
            d = det_mod_p(M, p)
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
