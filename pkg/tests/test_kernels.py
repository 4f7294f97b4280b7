from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from momentlag import _kernels_py, kernels
from momentlag.exact_linalg import det_int

try:
    from momentlag import _ckernels
except ImportError:  # extension not built
    _ckernels = None

IMPLS = [_kernels_py] + ([_ckernels] if _ckernels is not None else [])


def gf2_rank_oracle(rows, width):
    # Gaussian elimination on explicit bit lists
    M = [[(r >> j) & 1 for j in range(width)] for r in rows]
    rank = 0
    for c in range(width):
        piv = next((i for i in range(rank, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for i in range(len(M)):
            if i != rank and M[i][c]:
                M[i] = [a ^ b for a, b in zip(M[i], M[rank])]
        rank += 1
    return rank


def test_backend_reported():
    assert kernels.BACKEND in ("python", "cython")


@pytest.mark.parametrize("impl", IMPLS, ids=lambda m: m.BACKEND)
@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 2**70), max_size=40))
def test_gf2_rank_matches_oracle(impl, rows):
    assert impl.gf2_rank(list(rows)) == gf2_rank_oracle(rows, 71)


@pytest.mark.parametrize("impl", IMPLS, ids=lambda m: m.BACKEND)
@settings(max_examples=100, deadline=None)
@given(st.integers(2, 3).flatmap(lambda m: st.lists(st.lists(st.integers(-3, 3), min_size=m + 3, max_size=m + 3), min_size=m, max_size=m)))
def test_unimodular_matches_determinants(impl, A):
    m, n = len(A), len(A[0])
    masks = [sum(1 << j for j in S) for S in combinations(range(n), m)]
    expected = -1
    for idx, S in enumerate(combinations(range(n), m)):
        if abs(det_int([[A[r][j] for j in S] for r in range(m)])) != 1:
            expected = idx
            break
    assert kernels.first_non_unimodular(A, masks, impl=impl) == expected


def test_parallel_facets_give_singular_minor():
    A = [[1, 0, -1, 0], [0, 1, 0, -1]]
    assert kernels.first_non_unimodular(A, [0b0011, 0b0101]) == 1
    assert kernels.all_unimodular(A, [0b0011, 0b0110, 0b1100, 0b1001])


def test_prime_product_exceeds_bound():
    for bound in (1, 10**6, 10**30):
        prod = 1
        for p in kernels.primes_for_bound(bound):
            prod *= p
        assert prod > bound
