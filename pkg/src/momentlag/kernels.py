"""Backend selection for the hot loops.

The compiled extension is used when it imports; setting the environment
variable ``MOMENTLAG_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import math
import os
import sys
from typing import Sequence

from . import _kernels_py

if os.environ.get("MOMENTLAG_PURE_PYTHON") == "1":
    _impl = _kernels_py
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]
    except ImportError:  # pragma: no cover - depends on the build
        _impl = _kernels_py

BACKEND: str = _impl.BACKEND

# primes below 2**31 so that products of residues fit in a signed 64-bit word
_PRIMES = [2147483647, 2147483629, 2147483587, 2147483579, 2147483563, 2147483549,
           2147483543, 2147483497, 2147483489, 2147483477, 2147483423, 2147483399,
           2147483353, 2147483323, 2147483269, 2147483249, 2147483237, 2147483179,
           2147483171, 2147483137, 2147483123, 2147483077, 2147483069, 2147483059]


# the compiled GF(2) routine copies little-endian bytes straight into words
_gf2_impl = _impl if sys.byteorder == "little" else _kernels_py


def gf2_rank(rows: Sequence[int]) -> int:
    return _gf2_impl.gf2_rank(list(rows))


def primes_for_bound(bound: int) -> list[int]:
    """Enough large primes that their product exceeds ``bound``."""
    out = []
    prod = 1
    for p in _PRIMES:
        if prod > bound:
            break
        out.append(p)
        prod *= p
    if prod <= bound:
        raise ValueError("determinant bound too large for the prime table")
    return out


def hadamard_bound(A: Sequence[Sequence[int]]) -> int:
    """Upper bound for |det| of any square submatrix built from columns of A."""
    m = len(A)
    norms = sorted((sum(A[r][j] ** 2 for r in range(m)) for j in range(len(A[0]))), reverse=True)
    sq = 1
    for v in norms[:m]:
        sq *= max(v, 1)
    return math.isqrt(sq) + 1


def first_non_unimodular(A: Sequence[Sequence[int]], masks: Sequence[int], impl=None) -> int:
    """Index of the first selected maximal minor that is not +-1, or -1 if none."""
    impl = impl or _impl
    if not masks:
        return -1
    primes = primes_for_bound(hadamard_bound(A) + 1)
    big = max((abs(x) for row in A for x in row), default=0)
    if big >= 2**31 and impl is not _kernels_py:
        impl = _kernels_py
    return impl.unimodular_mod_primes([list(r) for r in A], list(masks), primes)


def all_unimodular(A: Sequence[Sequence[int]], masks: Sequence[int]) -> bool:
    return first_non_unimodular(A, masks) == -1
