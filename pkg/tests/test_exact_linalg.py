from fractions import Fraction
from itertools import combinations
from math import gcd

from hypothesis import given, settings
from hypothesis import strategies as st

from momentlag.exact_linalg import (
    Constraint,
    check_constraints,
    det_int,
    hermite_normal_form,
    hnf_basis,
    in_cone,
    integer_kernel,
    inverse_q,
    lattice_contains,
    lattice_equal,
    matmul,
    matvec,
    nullspace_q,
    rank_q,
    rational_feasible,
    smith_invariants,
    smith_normal_form,
    solve_q,
)

small_int = st.integers(min_value=-6, max_value=6)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small_int, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def det_fraction(M):
    # Laplace expansion: slow but independent of the Bareiss code
    n = len(M)
    if n == 0:
        return 1
    if n == 1:
        return M[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        total += (-1) ** j * M[0][j] * det_fraction(minor)
    return total


def minor_gcd(M, k):
    g = 0
    r, c = len(M), len(M[0])
    for rows in combinations(range(r), k):
        for cols in combinations(range(c), k):
            g = gcd(g, det_fraction([[M[i][j] for j in cols] for i in rows]))
    return g


def test_det_int_small():
    assert det_int([[2, 1], [7, 4]]) == 1
    assert det_int([[1, 2, 3], [4, 5, 6], [7, 8, 10]]) == -3
    assert det_int([[0, 1], [1, 0]]) == -1


def test_snf_examples():
    assert smith_invariants([[3, 0], [0, 5]]) == [1, 15]
    assert smith_invariants([[2, 4], [6, 8]]) == [2, 4]
    S, U, V = smith_normal_form([[2, 4], [6, 8]])
    assert matmul(matmul(U, [[2, 4], [6, 8]]), V) == S
    assert [S[0][0], S[1][1]] == [2, 4]


def test_hnf_of_known_lattice():
    H, U = hermite_normal_form([[2, 0], [1, 1]])
    assert H == [[1, 1], [0, 2]]
    assert matmul(U, [[2, 0], [1, 1]]) == H
    assert abs(det_int(U)) == 1


def test_integer_kernel_saturated():
    K = integer_kernel([[2, 4, 6]])
    assert len(K) == 2
    for v in K:
        assert 2 * v[0] + 4 * v[1] + 6 * v[2] == 0
    # the kernel of 2x + 4y + 6z contains (1, 1, -1); saturation means it is in the span
    assert lattice_contains(K, [1, 1, -1])


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_snf_divisibility_and_minor_gcds(M):
    d = smith_invariants(M)
    for a, b in zip(d, d[1:]):
        assert b % a == 0
    prod = 1
    for k in range(1, len(d) + 1):
        prod *= d[k - 1]
        assert abs(prod) == minor_gcd(M, k)
    assert len(d) == rank_q(M)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_snf_transform_identity(M):
    S, U, V = smith_normal_form(M)
    assert matmul(matmul(U, M), V) == S
    assert abs(det_int(U)) == 1 and abs(det_int(V)) == 1
    for i, row in enumerate(S):
        for j, x in enumerate(row):
            if i != j:
                assert x == 0


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_hnf_invariants(M):
    H, U = hermite_normal_form(M)
    assert matmul(U, M) == H
    assert abs(det_int(U)) == 1
    last = -1
    for row in H:
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            continue
        p = nz[0]
        assert p > last
        assert row[p] > 0
        last = p
    for i, row in enumerate(H):
        nz = [j for j, x in enumerate(row) if x]
        if nz:
            p = nz[0]
            for k in range(i):
                assert 0 <= H[k][p] < row[p]


@settings(max_examples=100, deadline=None)
@given(matrices(), st.lists(st.lists(small_int, min_size=4, max_size=4), min_size=1, max_size=3))
def test_lattice_equal_is_presentation_free(M, extra):
    width = len(M[0])
    combos = [[sum(c * M[i][j] for i, c in enumerate(coeffs[: len(M)])) for j in range(width)] for coeffs in extra]
    assert lattice_equal(M, M + combos)
    assert hnf_basis(M) == hnf_basis(list(reversed(M)))


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_kernel_is_kernel(M):
    K = integer_kernel(M)
    ncols = len(M[0])
    assert len(K) == ncols - rank_q(M)
    for v in K:
        assert all(x == 0 for x in matvec(M, v))
    # saturation: the kernel basis extends to a lattice basis, so its SNF is all ones
    if K:
        assert all(x == 1 for x in smith_invariants(K))


@settings(max_examples=100, deadline=None)
@given(matrices(), st.lists(small_int, min_size=4, max_size=4))
def test_solve_and_nullspace(M, x):
    x = x[: len(M[0])]
    b = matvec(M, x)
    y = solve_q(M, b)
    assert y is not None and matvec(M, y) == b
    for v in nullspace_q(M):
        assert all(c == 0 for c in matvec(M, v))


def test_inverse_q():
    inv = inverse_q([[2, 1], [1, 1]])
    assert inv == [[1, -1], [-1, 2]]
    assert inverse_q([[1, 2], [2, 4]]) is None


# --- rational feasibility --------------------------------------------------


def brute_feasible_2d(cons):
    """Nonstrict 2D systems inside a box: feasible iff some pairwise intersection point is."""
    box = [
        Constraint.make([1, 0], "<=", 20),
        Constraint.make([1, 0], ">=", -20),
        Constraint.make([0, 1], "<=", 20),
        Constraint.make([0, 1], ">=", -20),
    ]
    allc = list(cons) + box
    for c1, c2 in combinations(allc, 2):
        a, b = c1.coeffs, c2.coeffs
        det = a[0] * b[1] - a[1] * b[0]
        if det == 0:
            continue
        x = (c1.rhs * b[1] - c2.rhs * a[1]) / det
        y = (a[0] * c2.rhs - b[0] * c1.rhs) / det
        if check_constraints(allc, [x, y]):
            return True
    return False


constraint_2d = st.builds(
    lambda a, b, s, r: Constraint.make([a, b], s, r),
    small_int,
    small_int,
    st.sampled_from([">=", "<="]),
    st.integers(-10, 10),
).filter(lambda c: any(c.coeffs))


@settings(max_examples=200, deadline=None)
@given(st.lists(constraint_2d, min_size=1, max_size=6))
def test_rational_feasible_matches_vertex_oracle(cons):
    box = [
        Constraint.make([1, 0], "<=", 20),
        Constraint.make([1, 0], ">=", -20),
        Constraint.make([0, 1], "<=", 20),
        Constraint.make([0, 1], ">=", -20),
    ]
    x = rational_feasible(cons + box, dim=2)
    assert (x is not None) == brute_feasible_2d(cons)
    if x is not None:
        assert check_constraints(cons + box, x)


def test_strict_constraints():
    cons = [Constraint.make([1], ">", 0), Constraint.make([1], "<", 1)]
    x = rational_feasible(cons, dim=1)
    assert x is not None and 0 < x[0] < 1
    assert rational_feasible([Constraint.make([1], ">", 0), Constraint.make([1], "<=", 0)], dim=1) is None


def test_in_cone():
    lam = in_cone([[1, 0], [0, 1]], [2, 3])
    assert lam == [Fraction(2), Fraction(3)]
    assert in_cone([[1, 0], [0, 1]], [-1, 0]) is None


@settings(max_examples=100, deadline=None)
@given(matrices(), st.randoms(use_true_random=False))
def test_kernel_stable_under_row_permutation(M, rnd):
    rows = list(M)
    rnd.shuffle(rows)
    K1, K2 = integer_kernel(M), integer_kernel(rows)
    assert len(K1) == len(K2)
    if K1:
        assert lattice_equal(K1, K2)
