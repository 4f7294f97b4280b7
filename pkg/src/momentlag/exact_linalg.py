"""Exact integer and rational linear algebra.

Matrices are plain row-major lists of lists of Python ``int`` (or
``fractions.Fraction`` where noted).  Nothing in here touches floating point.

The normal forms follow the usual conventions:

* ``hermite_normal_form`` is row style: ``U @ M == H`` with ``U`` unimodular,
  nonzero rows of ``H`` on top, positive pivots, entries above a pivot reduced
  into ``[0, pivot)``.
* ``smith_normal_form`` returns ``(S, U, V)`` with ``U @ M @ V == S`` and the
  diagonal of ``S`` forming a divisibility chain of nonnegative integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

IntMatrix = list[list[int]]


# ---------------------------------------------------------------------------
# small helpers


def as_fraction(value) -> Fraction:
    """Parse ints, Fractions and ``"p/q"`` strings into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def fraction_str(value: Fraction) -> str:
    value = as_fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def identity(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> IntMatrix:
    return [[0] * c for _ in range(r)]


def transpose(M: Sequence[Sequence]) -> list[list]:
    if not M:
        return []
    return [list(col) for col in zip(*M)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    if not A:
        return []
    Bt = transpose(B)
    if not Bt:
        return [[] for _ in A]
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence], x: Sequence) -> list:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def shape(M: Sequence[Sequence], cols: Optional[int] = None) -> tuple[int, int]:
    r = len(M)
    if r == 0:
        return 0, (cols or 0)
    return r, len(M[0])


def _copy(M: Sequence[Sequence[int]]) -> IntMatrix:
    return [list(map(int, row)) for row in M]


def vector_gcd(v: Iterable[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def primitive(v: Sequence[int]) -> list[int]:
    g = vector_gcd(v)
    if g == 0:
        return list(v)
    return [x // g for x in v]


def det_int(M: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    n = len(M)
    if n == 0:
        return 1
    A = _copy(M)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        rowk = A[k]
        for i in range(k + 1, n):
            rowi = A[i]
            aik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (rowi[j] * akk - aik * rowk[j]) // prev
            rowi[k] = 0
        prev = akk
    return sign * A[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Hermite normal form


def hermite_normal_form(M: Sequence[Sequence[int]], cols: Optional[int] = None) -> tuple[IntMatrix, IntMatrix]:
    """Row-style HNF.  Returns ``(H, U)`` with ``U`` unimodular and ``U M = H``.

    ``cols`` only matters for matrices with zero rows, where the column count
    cannot be read off the data.
    """
    H = _copy(M)
    r = len(H)
    c = len(H[0]) if r else (cols or 0)
    U = identity(r)
    pivot_row = 0
    for j in range(c):
        if pivot_row >= r:
            break
        # Euclid on column j restricted to rows pivot_row..r-1
        while True:
            nz = [i for i in range(pivot_row, r) if H[i][j] != 0]
            if not nz:
                break
            best = min(nz, key=lambda i: abs(H[i][j]))
            if best != pivot_row:
                H[best], H[pivot_row] = H[pivot_row], H[best]
                U[best], U[pivot_row] = U[pivot_row], U[best]
            p = H[pivot_row][j]
            done = True
            for i in range(pivot_row + 1, r):
                q = H[i][j] // p
                if q:
                    Hi, Hp = H[i], H[pivot_row]
                    for t in range(j, c):
                        Hi[t] -= q * Hp[t]
                    Ui, Up = U[i], U[pivot_row]
                    for t in range(r):
                        Ui[t] -= q * Up[t]
                if H[i][j] != 0:
                    done = False
            if done:
                break
        if pivot_row < r and H[pivot_row][j] != 0:
            if H[pivot_row][j] < 0:
                H[pivot_row] = [-x for x in H[pivot_row]]
                U[pivot_row] = [-x for x in U[pivot_row]]
            p = H[pivot_row][j]
            for i in range(pivot_row):
                q = H[i][j] // p
                if q:
                    H[i] = [a - q * b for a, b in zip(H[i], H[pivot_row])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[pivot_row])]
            pivot_row += 1
    return H, U


def hnf_basis(gens: Sequence[Sequence[int]], dim: Optional[int] = None) -> IntMatrix:
    """Canonical basis (nonzero HNF rows) of the lattice spanned by ``gens``."""
    if not gens:
        return []
    H, _ = hermite_normal_form(gens, cols=dim)
    return [row for row in H if any(row)]


def lattice_equal(gens_a: Sequence[Sequence[int]], gens_b: Sequence[Sequence[int]]) -> bool:
    """True iff the two generating sets span the same sublattice of Z^d."""
    return hnf_basis(gens_a) == hnf_basis(gens_b)


def lattice_contains(gens: Sequence[Sequence[int]], v: Sequence[int]) -> bool:
    basis = hnf_basis(gens)
    return hnf_basis(basis + [list(v)]) == basis


# ---------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(M: Sequence[Sequence[int]], cols: Optional[int] = None) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(S, U, V)`` with ``U M V = S`` diagonal and d1 | d2 | ...."""
    S = _copy(M)
    r = len(S)
    c = len(S[0]) if r else (cols or 0)
    U = identity(r)
    V = identity(c)

    def swap_rows(i, k):
        S[i], S[k] = S[k], S[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for row in S:
            row[j], row[k] = row[k], row[j]
        for row in V:
            row[j], row[k] = row[k], row[j]

    def add_row(dst, src, q):  # row_dst -= q row_src
        S[dst] = [a - q * b for a, b in zip(S[dst], S[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst -= q col_src
        for row in S:
            row[dst] -= q * row[src]
        for row in V:
            row[dst] -= q * row[src]

    t = 0
    while t < min(r, c):
        # pick the smallest nonzero entry in the trailing block
        best = None
        for i in range(t, r):
            for j in range(t, c):
                v = S[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = S[t][t]
            clean = True
            for i in range(t + 1, r):
                if S[i][t]:
                    q = S[i][t] // p
                    add_row(i, t, q)
                    if S[i][t]:
                        clean = False
            for j in range(t + 1, c):
                if S[t][j]:
                    q = S[t][j] // p
                    add_col(j, t, q)
                    if S[t][j]:
                        clean = False
            if not clean:
                # move the smallest remainder to the pivot and repeat
                cand = [(abs(S[i][t]), i, t) for i in range(t + 1, r) if S[i][t]]
                cand += [(abs(S[t][j]), t, j) for j in range(t + 1, c) if S[t][j]]
                _, i, j = min(cand)
                if j == t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            # divisibility: every trailing entry must be a multiple of p
            bad = None
            for i in range(t + 1, r):
                for j in range(t + 1, c):
                    if S[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, -1)
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return S, U, V


def smith_invariants(M: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors of ``M`` (no transforms kept)."""
    S = _copy(M)
    r = len(S)
    c = len(S[0]) if r else 0
    out = []
    t = 0
    while t < min(r, c):
        best = None
        for i in range(t, r):
            row = S[i]
            for j in range(t, c):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        S[t], S[i] = S[i], S[t]
        if j != t:
            for row in S:
                row[t], row[j] = row[j], row[t]
        while True:
            p = S[t][t]
            clean = True
            rowt = S[t]
            for i in range(t + 1, r):
                v = S[i][t]
                if v:
                    q = v // p
                    rowi = S[i]
                    for k in range(t, c):
                        rowi[k] -= q * rowt[k]
                    if rowi[t]:
                        clean = False
            for j in range(t + 1, c):
                v = rowt[j]
                if v:
                    q = v // p
                    for row in S:
                        row[j] -= q * row[t]
                    if rowt[j]:
                        clean = False
            if not clean:
                cand = [(abs(S[i][t]), i, t) for i in range(t + 1, r) if S[i][t]]
                cand += [(abs(S[t][j]), t, j) for j in range(t + 1, c) if S[t][j]]
                _, i, j = min(cand)
                if j == t:
                    S[t], S[i] = S[i], S[t]
                else:
                    for row in S:
                        row[t], row[j] = row[j], row[t]
                continue
            bad = None
            for i in range(t + 1, r):
                rowi = S[i]
                for j in range(t + 1, c):
                    if rowi[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            S[t] = [a + b for a, b in zip(S[t], S[bad])]
        out.append(abs(S[t][t]))
        t += 1
    return out


# ---------------------------------------------------------------------------
# kernels and rational elimination


def integer_kernel(M: Sequence[Sequence[int]], cols: Optional[int] = None) -> IntMatrix:
    """Lattice basis of the saturated kernel ``{x in Z^cols : M x = 0}``.

    Computed from the row-style HNF of ``M^T``: rows of the transform that hit
    zero rows of the HNF span the kernel, and unimodularity makes it saturated.
    """
    r = len(M)
    c = len(M[0]) if r else (cols or 0)
    if r == 0:
        return identity(c)
    H, U = hermite_normal_form(transpose(M), cols=r)
    basis = [U[i] for i in range(c) if not any(H[i])]
    if basis:
        basis = trailing_pivot_form(basis)
    return basis


def trailing_pivot_form(gens: Sequence[Sequence[int]]) -> IntMatrix:
    """Canonical lattice basis with pivots taken from the right.

    This is the row HNF computed with the column order reversed, listed with
    pivot columns ascending.  When the trailing maximal minor is unimodular
    the basis carries an identity block on the last columns, which is the
    shape in which relations among facet normals are usually written.
    """
    rev = [list(reversed(row)) for row in gens]
    basis = hnf_basis(rev)
    basis = [list(reversed(row)) for row in basis]
    basis.reverse()
    return basis


def rref(M: Sequence[Sequence], ncols: Optional[int] = None) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q.  Returns (rows, pivot columns)."""
    A = [[Fraction(x) for x in row] for row in M]
    r = len(A)
    c = len(A[0]) if r else (ncols or 0)
    pivots = []
    row = 0
    for j in range(c):
        if row >= r:
            break
        p = next((i for i in range(row, r) if A[i][j] != 0), None)
        if p is None:
            continue
        A[row], A[p] = A[p], A[row]
        inv = 1 / A[row][j]
        A[row] = [x * inv for x in A[row]]
        for i in range(r):
            if i != row and A[i][j] != 0:
                f = A[i][j]
                A[i] = [a - f * b for a, b in zip(A[i], A[row])]
        pivots.append(j)
        row += 1
    return A, pivots


def rank_q(M: Sequence[Sequence]) -> int:
    if not M:
        return 0
    return len(rref(M)[1])


def solve_q(M: Sequence[Sequence], b: Sequence) -> Optional[list[Fraction]]:
    """One rational solution of ``M x = b`` (free variables set to 0), or None."""
    r = len(M)
    c = len(M[0]) if r else 0
    aug = [list(M[i]) + [b[i]] for i in range(r)]
    A, piv = rref(aug, ncols=c + 1)
    if c in piv:
        return None
    x = [Fraction(0)] * c
    for i, j in enumerate(piv):
        x[j] = A[i][c]
    return x


def nullspace_q(M: Sequence[Sequence], ncols: Optional[int] = None) -> list[list[Fraction]]:
    r = len(M)
    c = len(M[0]) if r else (ncols or 0)
    if r == 0:
        return [[Fraction(int(i == j)) for j in range(c)] for i in range(c)]
    A, piv = rref(M, ncols=c)
    free = [j for j in range(c) if j not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * c
        v[f] = Fraction(1)
        for i, j in enumerate(piv):
            v[j] = -A[i][f]
        basis.append(v)
    return basis


def inverse_q(M: Sequence[Sequence]) -> Optional[list[list[Fraction]]]:
    n = len(M)
    aug = [list(M[i]) + [int(i == j) for j in range(n)] for i in range(n)]
    A, piv = rref(aug, ncols=2 * n)
    if piv[:n] != list(range(n)) or len(piv) < n:
        return None
    return [row[n:] for row in A]


# ---------------------------------------------------------------------------
# exact rational feasibility (simplex, Bland's rule)


@dataclass(frozen=True)
class Constraint:
    """Affine constraint ``coeffs . x  (sense)  rhs``.

    ``sense`` is one of ``">=", "<=", "==", ">", "<"``.
    """

    coeffs: tuple
    sense: str
    rhs: Fraction

    @staticmethod
    def make(coeffs, sense, rhs) -> "Constraint":
        if sense not in (">=", "<=", "==", ">", "<"):
            raise ValueError(f"unknown constraint sense {sense!r}")
        return Constraint(tuple(as_fraction(a) for a in coeffs), sense, as_fraction(rhs))


def _simplex_max(T: list[list[Fraction]], basis: list[int], obj: list[Fraction], allowed: int) -> bool:
    """Maximise ``obj . x`` over the tableau ``T`` (rows: [coeffs | rhs]).

    Only the first ``allowed`` columns may enter.  Returns False if unbounded.
    Bland's rule (smallest index) is used for both entering and leaving, which
    rules out cycling.
    """
    m = len(T)
    ncol = len(T[0]) - 1
    while True:
        # reduced costs: c_j - c_B B^-1 A_j, with the tableau already in B^-1 A form
        enter = None
        for j in range(allowed):
            if j in basis:
                continue
            rc = obj[j] - sum(obj[basis[i]] * T[i][j] for i in range(m))
            if rc > 0:
                enter = j
                break
        if enter is None:
            return True
        leave = None
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][ncol] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            return False
        piv = T[leave][enter]
        T[leave] = [x / piv for x in T[leave]]
        for i in range(m):
            if i != leave and T[i][enter] != 0:
                f = T[i][enter]
                T[i] = [a - f * b for a, b in zip(T[i], T[leave])]
        basis[leave] = enter


def rational_feasible(constraints: Sequence[Constraint], dim: Optional[int] = None) -> Optional[list[Fraction]]:
    """Exact feasibility of a system of affine (in)equalities over Q.

    Returns a witness point or ``None`` if the system is infeasible.  Strict
    inequalities are handled by maximising a common slack ``t`` (capped at 1)
    and requiring ``t > 0`` at the optimum.
    """
    cons = [c if isinstance(c, Constraint) else Constraint.make(*c) for c in constraints]
    if dim is None:
        dim = len(cons[0].coeffs) if cons else 0
    if not cons:
        return [Fraction(0)] * dim
    strict = any(c.sense in (">", "<") for c in cons)
    # columns: x+ (dim), x- (dim), [t], slacks..., artificials...
    nx = 2 * dim
    tcol = nx if strict else None
    ncore = nx + (1 if strict else 0)
    rows = []
    for c in cons:
        a = list(c.coeffs)
        if len(a) != dim:
            raise ValueError("constraints have inconsistent dimension")
        base = a + [-x for x in a]
        tpart = []
        if strict:
            # a.x - t >= r  for ">", a.x + t <= r for "<"
            tpart = [Fraction(-1) if c.sense == ">" else Fraction(1) if c.sense == "<" else Fraction(0)]
        sense = {">": ">=", "<": "<="}.get(c.sense, c.sense)
        rows.append((base + tpart, sense, c.rhs))
    if strict:
        row = [Fraction(0)] * nx + [Fraction(1)]
        rows.append((row, "<=", Fraction(1)))
    nslack = sum(1 for _, s, _ in rows if s != "==")
    m = len(rows)
    total = ncore + nslack + m
    T = []
    basis = []
    si = 0
    for i, (coef, sense, rhs) in enumerate(rows):
        line = [Fraction(0)] * (total + 1)
        line[:ncore] = coef
        if sense != "==":
            line[ncore + si] = Fraction(1) if sense == "<=" else Fraction(-1)
            si += 1
        line[total] = rhs
        if rhs < 0:
            line = [-x for x in line]
        line[ncore + nslack + i] = Fraction(1)
        T.append(line)
        basis.append(ncore + nslack + i)
    # phase one: maximise -(sum of artificials)
    obj = [Fraction(0)] * total
    for i in range(m):
        obj[ncore + nslack + i] = Fraction(-1)
    _simplex_max(T, basis, obj, total)
    if sum(T[i][total] for i in range(m) if basis[i] >= ncore + nslack) != 0:
        return None
    # drive artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= ncore + nslack:
            for j in range(ncore + nslack):
                if T[i][j] != 0 and j not in basis:
                    piv = T[i][j]
                    T[i] = [x / piv for x in T[i]]
                    for k in range(m):
                        if k != i and T[k][j] != 0:
                            f = T[k][j]
                            T[k] = [a - f * b for a, b in zip(T[k], T[i])]
                    basis[i] = j
                    break
    if strict:
        obj = [Fraction(0)] * total
        obj[tcol] = Fraction(1)
        # remove redundant rows still carried by artificials (they are all-zero in core)
        _simplex_max(T, basis, obj, ncore + nslack)
    values = [Fraction(0)] * total
    for i, b in enumerate(basis):
        values[b] = T[i][total]
    if strict and values[tcol] <= 0:
        return None
    return [values[i] - values[dim + i] for i in range(dim)]


def check_constraints(constraints: Sequence[Constraint], x: Sequence[Fraction]) -> bool:
    for c in constraints:
        v = sum(a * xi for a, xi in zip(c.coeffs, x))
        ok = {
            ">=": v >= c.rhs,
            "<=": v <= c.rhs,
            "==": v == c.rhs,
            ">": v > c.rhs,
            "<": v < c.rhs,
        }[c.sense]
        if not ok:
            return False
    return True


def in_cone(gens: Sequence[Sequence], target: Sequence) -> Optional[list[Fraction]]:
    """Nonnegative coefficients ``lam`` with ``sum lam_j gens[j] = target``, if any."""
    k = len(gens)
    d = len(target)
    if k == 0:
        return [] if all(as_fraction(t) == 0 for t in target) else None
    cons = []
    for i in range(d):
        cons.append(Constraint.make([g[i] for g in gens], "==", target[i]))
    for j in range(k):
        e = [0] * k
        e[j] = 1
        cons.append(Constraint.make(e, ">=", 0))
    return rational_feasible(cons, dim=k)
