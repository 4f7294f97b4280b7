"""Quadric systems  sum_j gamma_j u_j^2 = delta  and Gale duality.

A :class:`QuadricSystem` keeps the coefficient matrix of an *un-wedged*
system together with a multiplicity vector ``J``; the actual system repeats
column ``j`` exactly ``J[j]`` times.  Keeping the short form makes all the
lattice and cone computations work on distinct columns only, and the
expanded matrix is available as :meth:`QuadricSystem.full_gamma`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import Infeasible, InvalidInput, NotCPForm
from .exact_linalg import (
    Constraint,
    as_fraction,
    fraction_str,
    hnf_basis,
    in_cone,
    integer_kernel,
    inverse_q,
    matvec,
    nullspace_q,
    rank_q,
    rational_feasible,
    solve_q,
    trailing_pivot_form,
    transpose,
)
from .face_ring import SimplicialComplex, members
from .polytope import Polytope


@dataclass(frozen=True)
class QuadricSystem:
    Gamma: tuple[tuple[int, ...], ...]
    delta: tuple[Fraction, ...]
    J: Optional[tuple[int, ...]] = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        G = tuple(tuple(int(x) for x in row) for row in self.Gamma)
        d = tuple(as_fraction(x) for x in self.delta)
        if not G or not G[0]:
            raise InvalidInput("Gamma must be a nonempty matrix")
        width = len(G[0])
        if any(len(row) != width for row in G):
            raise InvalidInput("Gamma rows have different lengths")
        if len(d) != len(G):
            raise InvalidInput("delta must have one entry per row of Gamma")
        J = tuple(int(j) for j in self.J) if self.J is not None else (1,) * width
        if len(J) != width:
            raise InvalidInput("J must have one entry per column of Gamma")
        if any(j < 1 for j in J):
            raise InvalidInput("multiplicities must be positive")
        object.__setattr__(self, "Gamma", G)
        object.__setattr__(self, "delta", d)
        object.__setattr__(self, "J", J)
        if rank_q(G) != len(G):
            raise InvalidInput("the columns of Gamma must span Q^(n-m)")

    # --- sizes ---------------------------------------------------------------

    @property
    def rows(self) -> int:
        """Number of quadrics, n - m."""
        return len(self.Gamma)

    @property
    def n(self) -> int:
        """Number of variables of the (wedged) system."""
        return sum(self.J)

    @property
    def m(self) -> int:
        return self.n - self.rows

    @property
    def base_n(self) -> int:
        return len(self.J)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.Gamma)

    def full_gamma(self) -> list[list[int]]:
        cols = self.full_columns()
        return [[c[k] for c in cols] for k in range(self.rows)]

    def full_columns(self) -> list[tuple[int, ...]]:
        out = []
        for j, mult in enumerate(self.J):
            out.extend([self.column(j)] * mult)
        return out

    def column_groups(self) -> list[list[int]]:
        """Indices of the wedged variables coming from each base column."""
        out = []
        start = 0
        for mult in self.J:
            out.append(list(range(start, start + mult)))
            start += mult
        return out

    def labels(self) -> Optional[tuple[str, ...]]:
        if all(j == 1 for j in self.J):
            return None
        out = []
        for j, mult in enumerate(self.J):
            for c in range(mult):
                out.append(str(j + 1) if mult == 1 else f"{j + 1}.{c + 1}")
        return tuple(out)

    def is_all_even(self) -> bool:
        return all(j % 2 == 0 for j in self.J)

    # --- serialisation -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "Gamma": [list(row) for row in self.Gamma],
            "delta": [fraction_str(x) for x in self.delta],
            "J": list(self.J),
        }

    @classmethod
    def from_json(cls, data: dict) -> "QuadricSystem":
        try:
            return cls(
                tuple(tuple(int(x) for x in row) for row in data["Gamma"]),
                tuple(as_fraction(x) for x in data["delta"]),
                tuple(int(j) for j in data["J"]) if data.get("J") is not None else None,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed quadric system JSON: {exc}") from exc

    # --- distinct columns ----------------------------------------------------

    def classes(self) -> list[tuple[tuple[int, ...], list[int]]]:
        """Distinct columns of the wedged system with the variables carrying them."""
        if "classes" in self._cache:
            return self._cache["classes"]
        seen: dict[tuple, list[int]] = {}
        for v, col in enumerate(self.full_columns()):
            seen.setdefault(col, []).append(v)
        out = list(seen.items())
        self._cache["classes"] = out
        return out


# ---------------------------------------------------------------------------
# Gale duality


def polytope_to_quadrics(P: Polytope) -> QuadricSystem:
    """Gale dual of the normals with right-hand side delta = Gamma b.

    Rows with negative right-hand side are negated, so every quadric reads
    with a nonnegative radius.
    """
    if not P.is_integral:
        raise InvalidInput("Gale duality needs integral normals")
    G = integer_kernel(P.A)
    delta = matvec(G, P.b)
    rows = []
    rhs = []
    for row, d in zip(G, delta):
        if d < 0:
            row = [-x for x in row]
            d = -d
        rows.append(tuple(row))
        rhs.append(d)
    return QuadricSystem(tuple(rows), tuple(rhs))


def nonnegative_solution(QS: QuadricSystem) -> Optional[list[Fraction]]:
    """An exact u >= 0 with full_gamma u = delta; strictly positive when possible."""
    G = QS.full_gamma()
    n = QS.n
    for sense in (">", ">="):
        cons = [Constraint.make(G[k], "==", QS.delta[k]) for k in range(QS.rows)]
        for j in range(n):
            e = [0] * n
            e[j] = 1
            cons.append(Constraint.make(e, sense, 0))
        sol = rational_feasible(cons, dim=n)
        if sol is not None:
            return sol
    return None


def quadrics_to_polytope(QS: QuadricSystem) -> Polytope:
    """Polytope whose Gale dual is the given system.

    The normals are the columns of an integer relation matrix of Gamma and
    ``b`` is an exact LP solution of  Gamma b = delta, b >= 0.
    """
    b = nonnegative_solution(QS)
    if b is None:
        raise Infeasible("no nonnegative solution of Gamma b = delta: the variety is empty")
    A = integer_kernel(QS.full_gamma())
    if not A:
        raise InvalidInput("Gamma has no relations: the polytope would be a point")
    return Polytope(len(A), tuple(tuple(row) for row in A), tuple(b))


# ---------------------------------------------------------------------------
# smoothness and the nerve on the Gale side


def _feasible_bases(QS: QuadricSystem):
    """Feasible bases of distinct columns: (class indices, coefficients)."""
    if "bases" in QS._cache:
        return QS._cache["bases"]
    cls = QS.classes()
    r = QS.rows
    out = []
    for S in itertools.combinations(range(len(cls)), r):
        M = [[cls[s][0][k] for s in S] for k in range(r)]
        inv = inverse_q(M)
        if inv is None:
            continue
        lam = matvec(inv, QS.delta)
        if all(v >= 0 for v in lam):
            out.append((S, lam))
    QS._cache["bases"] = out
    return out


def is_smooth_nonempty(QS: QuadricSystem) -> bool:
    """delta lies in the cone of the columns and in no cone of fewer than n-m of them.

    Every conic representation of delta reduces to one supported on linearly
    independent columns, which extends to a basis; so the condition says that
    feasible bases exist and none of them has a vanishing coefficient.
    """
    bases = _feasible_bases(QS)
    if not bases:
        return False
    return all(v > 0 for _, lam in bases for v in lam)


def is_smooth_nonempty_by_subsets(QS: QuadricSystem) -> bool:
    """Cross-check by exact cone membership over every small set of distinct columns."""
    cls = [c for c, _ in QS.classes()]
    r = QS.rows
    if in_cone(cls, QS.delta) is None:
        return False
    for size in range(0, r):
        for T in itertools.combinations(range(len(cls)), size):
            if in_cone([cls[t] for t in T], QS.delta) is not None:
                return False
    return True


def class_complex(QS: QuadricSystem) -> SimplicialComplex:
    """Nerve on the distinct columns: T is a face iff delta lies in cone(columns not in T)."""
    if "class_complex" in QS._cache:
        return QS._cache["class_complex"]
    cls = [c for c, _ in QS.classes()]
    k = len(cls)

    def face(mask):
        rest = [cls[i] for i in range(k) if not mask >> i & 1]
        return in_cone(rest, QS.delta) is not None

    if not face(0):
        raise Infeasible("delta is not in the cone of the columns: the variety is empty")
    faces = {0}
    nonfaces = []
    frontier = [0]
    while frontier:
        nxt = []
        for f in frontier:
            for v in range(f.bit_length(), k):
                g = f | (1 << v)
                if all((g & ~(1 << u)) in faces for u in members(g)):
                    if face(g):
                        faces.add(g)
                        nxt.append(g)
                    else:
                        nonfaces.append(g)
        frontier = nxt
    K = SimplicialComplex.from_nonfaces(k, [members(m) for m in nonfaces])
    QS._cache["class_complex"] = K
    QS._cache["class_faces"] = sorted(faces)
    return K


def quadrics_nerve(QS: QuadricSystem) -> SimplicialComplex:
    """Nerve of the wedged system on its n variables.

    A set of variables is a face iff the set of distinct columns it exhausts
    is a face of :func:`class_complex`; minimal non-faces are therefore the
    unions of all variables over the classes of a minimal non-face.
    """
    K = class_complex(QS)
    cls = QS.classes()
    nf = []
    for f in K.min_nonfaces:
        nf.append(tuple(sorted(v for c in f for v in cls[c][1])))
    return SimplicialComplex.from_nonfaces(QS.n, nf, QS.labels())


# ---------------------------------------------------------------------------
# wedges


def multiwedge(QS: QuadricSystem, J: Sequence[int]) -> QuadricSystem:
    """Repeat variables: accepts a vector over the base columns or over all n variables.

    Multiplicities compose by multiplication.  A vector over the variables
    that is not constant on the copies of a base column turns the current
    wedged system into the new base.
    """
    J = [int(j) for j in J]
    if any(j < 1 for j in J):
        raise InvalidInput("multiplicities must be positive")
    if len(J) == QS.base_n:
        return QuadricSystem(QS.Gamma, QS.delta, tuple(a * b for a, b in zip(QS.J, J)))
    if len(J) != QS.n:
        raise InvalidInput("J must match the base columns or the variables")
    groups = QS.column_groups()
    if all(len({J[v] for v in g}) == 1 for g in groups):
        return QuadricSystem(QS.Gamma, QS.delta, tuple(QS.J[i] * J[g[0]] for i, g in enumerate(groups)))
    G = QS.full_gamma()
    return QuadricSystem(tuple(map(tuple, G)), QS.delta, tuple(J))


def expand_multiplicities(QS: QuadricSystem, J: Sequence[int]) -> list[int]:
    """A base-level multiplicity vector spread over the wedged variables."""
    out = []
    for g, j in zip(QS.column_groups(), J):
        out.extend([int(j)] * len(g))
    return out


# ---------------------------------------------------------------------------
# lattices


@dataclass
class LatticeData:
    Lambda_tilde: list[tuple[int, ...]]
    Lambda: list[tuple[int, ...]]
    basis_tilde: list[list[int]]
    basis: list[list[int]]

    @property
    def rank_tilde(self) -> int:
        return len(self.basis_tilde)

    @property
    def rank(self) -> int:
        return len(self.basis)


def lattice_data(QS: QuadricSystem) -> LatticeData:
    cols = [c for c, _ in QS.classes()]
    last = QS.full_columns()[-1]
    diffs = [tuple(a - b for a, b in zip(c, last)) for c in cols if c != last]
    return LatticeData(
        Lambda_tilde=cols,
        Lambda=diffs,
        basis_tilde=hnf_basis([list(c) for c in cols]),
        basis=hnf_basis([list(c) for c in diffs], dim=QS.rows) if diffs else [],
    )


def embeddedness_check(QS: QuadricSystem) -> bool:
    """Lattice criterion: for every face, the columns off the face still generate the full lattice."""
    return not embeddedness_failures(QS)


def embeddedness_failures(QS: QuadricSystem) -> list[tuple[int, ...]]:
    """Faces (as sets of 0-based variables) where the lattice drops."""
    cls = QS.classes()
    full = hnf_basis([list(c) for c, _ in cls])
    class_complex(QS)  # fills the face cache
    bad = []
    for f in QS._cache["class_faces"]:
        rest = [list(cls[i][0]) for i in range(len(cls)) if not f >> i & 1]
        if hnf_basis(rest, dim=QS.rows) != full:
            bad.append(tuple(sorted(v for i in members(f) for v in cls[i][1])))
    return bad


def fano_constant(QS: QuadricSystem) -> Optional[Fraction]:
    """The C > 0 with  sum of all columns = C delta,  if it exists."""
    total = [sum(c[k] for c in QS.full_columns()) for k in range(QS.rows)]
    C = None
    for t, d in zip(total, QS.delta):
        if d == 0:
            if t != 0:
                return None
            continue
        ratio = Fraction(t) / d
        if C is None:
            C = ratio
        elif ratio != C:
            return None
    if C is None or C <= 0:
        return None
    return C


def cp_normal_form(QS: QuadricSystem) -> QuadricSystem:
    """Equivalent system whose first quadric is  u_1^2 + ... + u_n^2 = r  and whose others are homogeneous.

    The remaining rows are the canonical basis of the saturated lattice of
    integer relations in the row space with zero right-hand side.  The
    returned system is expanded (J all ones) since the first row no longer
    distinguishes the copies.
    """
    G = QS.full_gamma()
    n = QS.n
    lam = solve_q(transpose(G), [1] * n)
    if lam is None:
        raise NotCPForm("the all-ones vector is not in the row space: sum of normals is not zero")
    radius = sum(l * d for l, d in zip(lam, QS.delta))
    if radius <= 0:
        raise NotCPForm("the sphere radius would not be positive")
    rest = nullspace_q([list(QS.delta)])
    rows = []
    for rho in rest:
        w = [sum(rho[k] * G[k][j] for k in range(QS.rows)) for j in range(n)]
        den = 1
        for x in w:
            den = den * x.denominator // _gcd(den, x.denominator)
        rows.append([int(x * den) for x in w])
    if rows:
        rows = trailing_pivot_form(integer_kernel(integer_kernel(rows)))
    out_rows = [tuple([1] * n)] + [tuple(r) for r in rows]
    out_delta = [radius] + [Fraction(0)] * len(rows)
    return QuadricSystem(tuple(out_rows), tuple(out_delta))


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a
