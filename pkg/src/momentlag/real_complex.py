"""Z/2 cellular cohomology of the real moment-angle complex and its antipodal quotient.

A cell of the real moment-angle complex inside the cube [-1, 1]^n is a pair
``(I, s)``: ``I`` (a face of K) is the set of interval coordinates and the
bitmask ``s`` on the complement of ``I`` records which of the remaining
coordinates sit at +1 (bit set) rather than -1.  The boundary of a cell
replaces one interval coordinate by each of its two endpoints.
"""

from __future__ import annotations

from typing import Optional

from . import kernels
from .errors import CapExceeded, InvalidInput, NotFree
from .face_ring import SimplicialComplex, iter_subsets, popcount
from .koszul import cohomology

DEFAULT_CAP = 12


def _cells(K: SimplicialComplex, cap: Optional[int]):
    cap = DEFAULT_CAP if cap is None else cap
    if K.n > cap:
        raise CapExceeded(f"real cubical complex limited to n <= {cap}", n=K.n, cap=cap)
    full = K.full_mask
    by_dim: dict[int, list[tuple[int, int]]] = {}
    for I in K.faces():
        comp = full & ~I
        dim = popcount(I)
        lst = by_dim.setdefault(dim, [])
        for s in iter_subsets(comp):
            lst.append((I, s))
    for lst in by_dim.values():
        lst.sort()
    return by_dim


def _boundary_rows(cells, index, canon=None):
    """Z/2 boundary of each cell, as a bitmask over the cells one dimension down."""
    rows = []
    for I, s in cells:
        row = 0
        rest = I
        while rest:
            low = rest & -rest
            rest ^= low
            J = I ^ low
            for t in (s, s | low):
                key = (J, t) if canon is None else canon(J, t)
                row ^= 1 << index[key]
        rows.append(row)
    return rows


def _betti(by_dim, canon=None) -> list[int]:
    top = max(by_dim)
    index = {d: {c: k for k, c in enumerate(by_dim[d])} for d in by_dim}
    ranks = {}
    for d in range(1, top + 1):
        rows = _boundary_rows(by_dim.get(d, []), index[d - 1], canon)
        ranks[d] = kernels.gf2_rank(rows)
    betti = []
    for d in range(top + 1):
        c = len(by_dim.get(d, []))
        betti.append(c - ranks.get(d, 0) - ranks.get(d + 1, 0))
    return betti


def cell_counts(K: SimplicialComplex, cap: Optional[int] = None) -> list[int]:
    by_dim = _cells(K, cap)
    return [len(by_dim.get(d, [])) for d in range(max(by_dim) + 1)]


def z2_betti_real(K: SimplicialComplex, cap: Optional[int] = None) -> list[int]:
    """Z/2 Betti numbers of the real moment-angle complex of K."""
    by_dim = _cells(K, cap)
    return _trim(_betti(by_dim))


def z2_betti_real_quotient(K: SimplicialComplex, cap: Optional[int] = None) -> list[int]:
    """Z/2 Betti numbers of the quotient by the simultaneous sign change.

    The involution sends ``(I, s)`` to ``(I, s ^ complement(I))``; it has no
    fixed cells unless ``I`` can be the whole vertex set.
    """
    if K.is_face_mask(K.full_mask):
        raise NotFree("the antipodal action has a fixed cell: K is a full simplex")
    canon = _antipodal(K)
    by_dim = _cells(K, cap)
    orbits = {d: sorted({canon(I, s) for I, s in cells}) for d, cells in by_dim.items()}
    return _trim(_betti(orbits, canon))


def _antipodal(K: SimplicialComplex):
    """Orbit representative of a cell under the simultaneous sign change."""
    full = K.full_mask

    def canon(I, s):
        return (I, min(s, s ^ (full & ~I)))

    return canon


def _trim(betti: list[int]) -> list[int]:
    while len(betti) > 1 and betti[-1] == 0:
        betti.pop()
    return betti


def euler_from_cells(K: SimplicialComplex, cap: Optional[int] = None) -> int:
    return sum((-1) ** d * c for d, c in enumerate(cell_counts(K, cap)))


def boundary_squares_to_zero(K: SimplicialComplex, quotient: bool = False, cap: Optional[int] = None) -> bool:
    """Audit that the Z/2 boundary composes to zero in every dimension."""
    by_dim = _cells(K, cap)
    canon = None
    if quotient:
        canon = _antipodal(K)
        by_dim = {d: sorted({canon(I, s) for I, s in cells}) for d, cells in by_dim.items()}
    index = {d: {c: k for k, c in enumerate(by_dim[d])} for d in by_dim}
    for d in range(2, max(by_dim) + 1):
        rows = _boundary_rows(by_dim[d], index[d - 1], canon)
        lower = _boundary_rows(by_dim[d - 1], index[d - 2], canon)
        for row in rows:
            acc = 0
            k = 0
            while row:
                if row & 1:
                    acc ^= lower[k]
                row >>= 1
                k += 1
            if acc:
                return False
    return True


def integral_vanishing_range_check(K: SimplicialComplex, bound: int, cap: Optional[int] = None) -> bool:
    """True iff the integral cohomology of R(K) vanishes in all degrees 0 < q < bound."""
    if bound < 1:
        raise InvalidInput("bound must be positive")
    if bound == 1:
        return True
    kwargs = {} if cap is None else {"cap": cap}
    table = cohomology(K, "Z", max_degree=bound - 1, **kwargs)
    for q in range(1, bound):
        if table.betti.get(q, 0) or table.torsion.get(q):
            return False
    return True
