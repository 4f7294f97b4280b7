"""Polytopes in H-presentation  <a_i, x> + b_i >= 0.

``A`` is stored as an ``m x n`` matrix whose columns are the inward normals
``a_i``; ``b`` is a vector of exact rationals.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Optional, Sequence

from . import kernels
from .errors import (
    CapExceeded,
    DepthTooLarge,
    EmptyInterior,
    Infeasible,
    InvalidInput,
    NotDelzant,
    NotGeneric,
    OriginNotInterior,
    Unbounded,
)
from .exact_linalg import (
    Constraint,
    as_fraction,
    det_int,
    fraction_str,
    integer_kernel,
    inverse_q,
    matvec,
    primitive,
    rank_q,
    rational_feasible,
    solve_q,
    vector_gcd,
)
from .face_ring import SimplicialComplex, _minimalize, mask_of, members, popcount

#: beyond this many m-subsets the vertex search switches to feasible bases
#: of the slack system, which has only n - m free coordinates
SUBSET_LIMIT = 20000
#: below this many facet subsets the direct search is always used
SMALL_SUBSETS = 2000
#: default cap on the number of vertices we are willing to materialise
VERTEX_CAP = 250000


def _num(x):
    x = as_fraction(x)
    return x.numerator if x.denominator == 1 else x


@dataclass(frozen=True)
class Polytope:
    m: int
    A: tuple[tuple, ...]
    b: tuple[Fraction, ...]
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        A = tuple(tuple(_num(x) for x in row) for row in self.A)
        b = tuple(as_fraction(x) for x in self.b)
        if len(A) != self.m:
            raise InvalidInput("A must have m rows")
        n = len(b)
        if any(len(row) != n for row in A):
            raise InvalidInput("A must have one column per entry of b")
        if n < self.m + 1:
            raise InvalidInput("a polytope needs at least m+1 facets")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        seen = {}
        for i in range(n):
            key = (tuple(self.normal(i)), b[i])
            if key in seen:
                warnings.warn(f"facet {i + 1} duplicates facet {seen[key] + 1}", stacklevel=3)
            else:
                seen[key] = i
        if self.interior_or_boundary_point() is None:
            raise Infeasible("the inequality system has no solution")

    # --- basic accessors ---------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.b)

    def normal(self, i: int) -> list:
        return [self.A[r][i] for r in range(self.m)]

    def normals(self) -> list[list]:
        return [self.normal(i) for i in range(self.n)]

    @property
    def is_integral(self) -> bool:
        return all(isinstance(x, int) for row in self.A for x in row)

    def slack(self, x: Sequence[Fraction]) -> list[Fraction]:
        return [sum(self.A[r][i] * x[r] for r in range(self.m)) + self.b[i] for i in range(self.n)]

    def constraints(self, equal: Sequence[int] = (), strict: Sequence[int] = ()) -> list[Constraint]:
        eq = set(equal)
        st = set(strict)
        cons = []
        for i in range(self.n):
            sense = "==" if i in eq else (">" if i in st else ">=")
            cons.append(Constraint.make(self.normal(i), sense, -self.b[i]))
        return cons

    def interior_or_boundary_point(self):
        return rational_feasible(self.constraints(), dim=self.m)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "A": [[fraction_str(x) if isinstance(x, Fraction) else x for x in row] for row in self.A],
            "b": [fraction_str(x) for x in self.b],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Polytope":
        try:
            A = [[as_fraction(x) if isinstance(x, str) else int(x) for x in row] for row in data["A"]]
            return cls(int(data["m"]), tuple(map(tuple, A)), tuple(as_fraction(x) for x in data["b"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed polytope JSON: {exc}") from exc

    @classmethod
    def from_normals(cls, normals: Sequence[Sequence], b: Sequence) -> "Polytope":
        m = len(normals[0])
        A = tuple(tuple(nv[r] for nv in normals) for r in range(m))
        return cls(m, A, tuple(as_fraction(x) for x in b))


@dataclass
class VertexSet:
    """Vertices with their active facet sets.

    Points are produced lazily from the slack vectors, since large wedge
    presentations have many vertices but most callers only need the
    incidence data.
    """

    polytope: Polytope
    active_masks: list[int]
    _points: Optional[list[tuple]] = None

    def __len__(self) -> int:
        return len(self.active_masks)

    @property
    def active_facets(self) -> list[tuple[int, ...]]:
        return [tuple(members(m)) for m in self.active_masks]

    @property
    def vertices(self) -> list[tuple[Fraction, ...]]:
        if self._points is None:
            self._points = [self._point(k) for k in range(len(self.active_masks))]
        return self._points

    def _point(self, k: int) -> tuple[Fraction, ...]:
        P = self.polytope
        act = members(self.active_masks[k])
        rows = [P.normal(i) for i in act]
        rhs = [-P.b[i] for i in act]
        x = solve_q(rows, rhs)
        return tuple(x)


# ---------------------------------------------------------------------------
# vertex enumeration


def _check_size(count: int, cap: Optional[int]) -> None:
    cap = VERTEX_CAP if cap is None else cap
    if count > cap:
        raise CapExceeded(f"{count} vertices exceed the cap of {cap}", count=count, cap=cap)


def enumerate_vertices(P: Polytope, cap: Optional[int] = None) -> VertexSet:
    """All vertices of a bounded polytope, with active facet sets.

    Small cases solve every m-subset of facet equations and filter by
    feasibility.  When the number of m-subsets is large the equivalent search
    over complementary feasible bases of the slack system is used instead.
    """
    key = ("vertices", cap)
    if key in P._cache:
        return P._cache[key]
    if not is_bounded(P):
        raise Unbounded("the polytope has a nontrivial recession cone")
    subsets = comb(P.n, P.m)
    if subsets <= SUBSET_LIMIT and (subsets <= SMALL_SUBSETS or subsets <= _slack_basis_count(P)):
        vs = _vertices_by_subsets(P, cap)
    else:
        vs = _vertices_by_slack_bases(P, cap)
    P._cache[key] = vs
    return vs


def _slack_basis_count(P: Polytope) -> int:
    """Number of candidate bases the slack search would try."""
    G = integer_kernel(P.A)
    cols = {tuple(G[k][j] for k in range(len(G))) for j in range(P.n)}
    return comb(len(cols), len(G))


def _vertices_by_subsets(P: Polytope, cap) -> VertexSet:
    found: dict[tuple, int] = {}
    order = []
    normals = P.normals()
    for tau in itertools.combinations(range(P.n), P.m):
        rows = [normals[i] for i in tau]
        inv = inverse_q(rows)
        if inv is None:
            continue
        rhs = [-P.b[i] for i in tau]
        x = tuple(matvec(inv, rhs))
        if x in found:
            continue
        s = P.slack(x)
        if any(v < 0 for v in s):
            continue
        found[x] = mask_of(i for i, v in enumerate(s) if v == 0)
        order.append(x)
        _check_size(len(order), cap)
    vs = VertexSet(P, [found[x] for x in order])
    vs._points = order
    return vs


def _vertices_by_slack_bases(P: Polytope, cap) -> VertexSet:
    """Vertices as basic feasible solutions of  u >= 0,  G u = G b.

    ``G`` is a Gale dual of the normals (rows span the linear relations among
    the a_i), so ``u = A^T x + b`` identifies P with this slice of the
    orthant.  Columns of ``G`` that coincide are grouped: a basis can use at
    most one of them and all choices give the same values.
    """
    G = integer_kernel(P.A)
    r = len(G)
    delta = matvec(G, P.b)
    cols = [tuple(G[k][j] for k in range(r)) for j in range(P.n)]
    groups: dict[tuple, list[int]] = {}
    for j, c in enumerate(cols):
        groups.setdefault(c, []).append(j)
    reps = list(groups)
    full = (1 << P.n) - 1
    found: dict[int, bool] = {}
    for S in itertools.combinations(range(len(reps)), r):
        M = [[reps[s][k] for s in S] for k in range(r)]
        inv = inverse_q(M)
        if inv is None:
            continue
        lam = matvec(inv, delta)
        if any(v < 0 for v in lam):
            continue
        # a vertex is determined by its active set (the active normals have
        # rank m), so the inactive set "one copy per positive coordinate"
        # identifies it
        choices = [groups[reps[S[t]]] for t in range(r) if lam[t] != 0]
        for pick in itertools.product(*choices):
            found[full & ~mask_of(pick)] = True
            _check_size(len(found), cap)
    return VertexSet(P, list(found))


# ---------------------------------------------------------------------------
# predicates


def is_bounded(P: Polytope) -> bool:
    """Recession cone {x : A^T x >= 0} is trivial."""
    if "bounded" in P._cache:
        return P._cache["bounded"]
    if rank_q(P.A) < P.m:
        P._cache["bounded"] = False
        return False
    # a nonzero recession direction has some <a_i, x> > 0; normalise the sum
    cons = [Constraint.make(P.normal(i), ">=", 0) for i in range(P.n)]
    total = [sum(P.A[r][i] for i in range(P.n)) for r in range(P.m)]
    cons.append(Constraint.make(total, ">=", 1))
    bounded = rational_feasible(cons, dim=P.m) is None
    P._cache["bounded"] = bounded
    return bounded


def is_bounded_by_relation(P: Polytope) -> bool:
    """Cross-check: a strictly positive linear relation among the normals exists."""
    if rank_q(P.A) < P.m:
        return False
    cons = [Constraint.make(row, "==", 0) for row in P.A]
    for i in range(P.n):
        e = [0] * P.n
        e[i] = 1
        cons.append(Constraint.make(e, ">=", 1))
    return rational_feasible(cons, dim=P.n) is not None


def facets_meet(P: Polytope, tau: Sequence[int], strict_others: bool = False) -> bool:
    """Exact test that the facets in ``tau`` have a common point in P."""
    tau = list(tau)
    others = [i for i in range(P.n) if i not in tau] if strict_others else []
    return rational_feasible(P.constraints(equal=tau, strict=others), dim=P.m) is not None


def irredundant_facets(P: Polytope) -> set[int]:
    """Facets that cannot be dropped: some point lies on it and strictly inside all others.

    When the vertices are already known and each has exactly m active
    inequalities, an inequality is a facet iff it is tight at some vertex,
    which avoids one linear program per facet.
    """
    vs = P._cache.get(("vertices", None))
    if vs is not None and all(popcount(mask) == P.m for mask in vs.active_masks):
        union = 0
        for mask in vs.active_masks:
            union |= mask
        return set(members(union))
    return irredundant_facets_by_lp(P)


def irredundant_facets_by_lp(P: Polytope) -> set[int]:
    return {i for i in range(P.n) if facets_meet(P, [i], strict_others=True)}


def is_irredundant(P: Polytope) -> bool:
    return len(irredundant_facets(P)) == P.n


def is_generic(P: Polytope, cap: Optional[int] = None) -> bool:
    vs = enumerate_vertices(P, cap)
    for mask in vs.active_masks:
        act = members(mask)
        if len(act) != P.m:
            return False
    # independence: with exactly m active facets at an isolated point the
    # normals are independent automatically; checked anyway on small inputs
    if len(vs) <= 5000:
        for mask in vs.active_masks:
            rows = [P.normal(i) for i in members(mask)]
            singular = det_int(rows) == 0 if P.is_integral else rank_q(rows) != P.m
            if singular:
                return False
    return True


def is_delzant(P: Polytope, cap: Optional[int] = None) -> bool:
    """Every vertex cone is unimodular: the m active normals have det +-1."""
    if not P.is_integral:
        raise InvalidInput("Delzant test needs integral normals")
    if not is_generic(P, cap):
        raise NotGeneric("the polytope is not simple")
    vs = enumerate_vertices(P, cap)
    return kernels.all_unimodular(P.A, vs.active_masks)


def is_fano(P: Polytope) -> bool:
    """Primitive normals and all b_i equal (Delzant presentations only)."""
    if not is_delzant(P):
        raise NotDelzant("the Fano test applies to Delzant polytopes")
    if any(vector_gcd(nv) != 1 for nv in P.normals()):
        return False
    return len(set(P.b)) == 1


def dual_polytope(P: Polytope) -> list[tuple[Fraction, ...]]:
    """Vertices of the polar dual:  the normals a_i / b_i."""
    if any(v <= 0 for v in P.b):
        raise OriginNotInterior("the origin must lie in the interior (all b_i > 0)")
    pts = [tuple(as_fraction(x) / P.b[i] for x in P.normal(i)) for i in range(P.n)]
    return [p for k, p in enumerate(pts) if _is_extreme(pts, k)]


def _is_extreme(pts: Sequence[Sequence[Fraction]], k: int) -> bool:
    others = [p for j, p in enumerate(pts) if j != k]
    if not others:
        return True
    d = len(pts[k])
    # p_k is not extreme iff it is a convex combination of the others
    cons = [Constraint.make([o[r] for o in others], "==", pts[k][r]) for r in range(d)]
    cons.append(Constraint.make([1] * len(others), "==", 1))
    for j in range(len(others)):
        e = [0] * len(others)
        e[j] = 1
        cons.append(Constraint.make(e, ">=", 0))
    return rational_feasible(cons, dim=len(others)) is None


def polar_polytope(P: Polytope) -> Polytope:
    """H-presentation of the polar dual: one inequality <v, y> + 1 >= 0 per vertex v of P.

    Requires the origin in the interior; rational vertex coordinates are
    cleared to primitive integer normals with the matching right-hand side.
    """
    if any(v <= 0 for v in P.b):
        raise OriginNotInterior("the origin must lie in the interior (all b_i > 0)")
    vs = enumerate_vertices(P)
    normals = []
    rhs = []
    for x in vs.vertices:
        den = 1
        for c in x:
            den = den * c.denominator // _gcd(den, c.denominator)
        v = [int(c * den) for c in x]
        normals.append(v)
        rhs.append(Fraction(den))
    return Polytope.from_normals(normals, rhs)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def normalize_b(P: Polytope) -> Polytope:
    """Combinatorially equivalent presentation with every b_i equal to 1.

    If the origin is already interior only the normals are rescaled;
    otherwise the origin is first moved to the vertex centroid.
    """
    if all(v > 0 for v in P.b):
        shift = [Fraction(0)] * P.m
    else:
        pt = rational_feasible(P.constraints(strict=range(P.n)), dim=P.m)
        if pt is None:
            raise EmptyInterior("the polytope has empty interior")
        verts = enumerate_vertices(P).vertices
        shift = [sum(v[r] for v in verts) / len(verts) for r in range(P.m)]
    newb = P.slack(shift)
    if any(v <= 0 for v in newb):
        raise EmptyInterior("could not place the origin in the interior")
    normals = [[as_fraction(x) / newb[i] for x in P.normal(i)] for i in range(P.n)]
    return Polytope.from_normals(normals, [1] * P.n)


def nerve(P: Polytope, cap: Optional[int] = None, verify: Optional[bool] = None) -> SimplicialComplex:
    """The nerve K_P of the facet covering of the boundary, by minimal non-faces.

    Facet sets with a common point are exactly the subsets of vertex active
    sets (every nonempty face of a bounded polytope contains a vertex); the
    minimal non-faces are the minimal transversals of the complements of the
    active sets.  On small inputs each reported minimal non-face is confirmed
    with exact feasibility tests.
    """
    key = ("nerve", cap)
    if key in P._cache:
        return P._cache[key]
    if not is_generic(P, cap):
        raise NotGeneric("the nerve is only formed for simple polytopes")
    if not is_irredundant(P):
        raise InvalidInput("the presentation has redundant facets")
    vs = enumerate_vertices(P, cap)
    full = (1 << P.n) - 1
    complements = sorted({full & ~m for m in vs.active_masks})
    nonfaces = minimal_transversals(complements)
    K = SimplicialComplex.from_nonfaces(P.n, [members(m) for m in nonfaces])
    if verify is None:
        verify = P.n <= 12
    if verify:
        for f in K.min_nonfaces:
            if facets_meet(P, f):
                raise AssertionError(f"facet set {f} meets although it is not a face")
            for v in f:
                rest = [u for u in f if u != v]
                if rest and not facets_meet(P, rest):
                    raise AssertionError(f"facet set {rest} should meet")
    P._cache[key] = K
    return K


def minimal_transversals(edges: Sequence[int]) -> list[int]:
    """Minimal hitting sets of a family of sets (bitmasks), Berge's method."""
    edges = _minimalize(edges)
    trans = [0]
    for e in edges:
        keep = [t for t in trans if t & e]
        miss = [t for t in trans if not t & e]
        cand = set(keep)
        for t in miss:
            for v in members(e):
                cand.add(t | (1 << v))
        trans = _minimalize(cand)
    return sorted(trans)


def cut_vertex(P: Polytope, vertex: Sequence, depth) -> Polytope:
    """Cut off a simple vertex ``v`` by one new facet.

    The normals ``a_i`` point into the polytope, so the new normal is the
    primitive vector along the sum of the normals active at ``v``.  The new
    inequality  <a, x - v> - depth >= 0  removes ``v`` and must keep every
    other vertex strictly inside.
    """
    depth = as_fraction(depth)
    if depth <= 0:
        raise InvalidInput("depth must be positive")
    vs = enumerate_vertices(P)
    v = tuple(as_fraction(c) for c in vertex)
    if v not in vs.vertices:
        raise InvalidInput("the given point is not a vertex")
    idx = vs.vertices.index(v)
    act = members(vs.active_masks[idx])
    if len(act) != P.m:
        raise NotGeneric("can only cut simple vertices")
    s = [sum(P.normal(i)[r] for i in act) for r in range(P.m)]
    if any(isinstance(c, Fraction) and c.denominator != 1 for c in s):
        raise InvalidInput("cutting needs integral normals")
    a = [int(c) for c in primitive([int(c) for c in s])]
    # <a, v> + c = -depth, so v violates the new inequality
    c = -sum(a[r] * v[r] for r in range(P.m)) - depth
    for k, w in enumerate(vs.vertices):
        if k == idx:
            continue
        if sum(a[r] * w[r] for r in range(P.m)) + c <= 0:
            raise DepthTooLarge("the cut removes or touches another vertex")
    normals = P.normals() + [a]
    return Polytope.from_normals(normals, list(P.b) + [c])
