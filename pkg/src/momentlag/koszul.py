"""The finite bigraded DGA  R(K) = Lambda[y_1..y_n] (x) k[K] / (v_i^2 = y_i v_i = 0).

A basis element ``y_sigma v_tau`` is stored as the pair of bitmasks
``(sigma, tau)`` with ``sigma`` and ``tau`` disjoint and ``tau`` a face.
Degrees: ``deg y_i = 1``, ``deg v_i = 2``, ``d y_i = v_i``, ``d v_i = 0``.

Cohomology splits over the multidegree ``omega = sigma | tau``: the
differential only moves an index from ``sigma`` to ``tau``.  For fixed
``omega`` the elements are indexed by the faces ``tau`` of the full
subcomplex on ``omega``, and the block is a copy of its augmented simplicial
cochain complex.  Blocks with ``omega`` a nonempty face are acyclic and
skipped.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import kernels
from .errors import CapExceeded, InvalidInput
from .exact_linalg import rank_q, smith_invariants
from .face_ring import SimplicialComplex, faces_within, mask_of, members, popcount

COEFFS = ("Z", "Z2", "Q")
DEFAULT_CAP = 20_000_000


def _check_coeff(coeff: str) -> str:
    if coeff not in COEFFS:
        raise InvalidInput(f"unknown coefficient ring {coeff!r}; use one of {COEFFS}")
    return coeff


def _normalize(x, coeff: str):
    if coeff == "Z2":
        return int(x) % 2
    if coeff == "Q":
        return Fraction(x)
    if isinstance(x, Fraction):
        if x.denominator != 1:
            raise InvalidInput("non-integral coefficient over Z")
        return x.numerator
    return int(x)


def exterior_sign(sigma: int, other: int) -> int:
    """Sign of  y_sigma y_other = sign * y_(sigma|other)  for disjoint masks."""
    inversions = 0
    s = sigma
    while s:
        low = s & -s
        inversions += popcount(other & (low - 1))
        s ^= low
    return -1 if inversions & 1 else 1


def position(i: int, sigma: int) -> int:
    # number of elements of sigma below i
    return popcount(sigma & ((1 << i) - 1))


@dataclass
class KoszulCochain:
    K: SimplicialComplex
    coeff: str = "Q"
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        _check_coeff(self.coeff)
        clean = {}
        for (s, t), c in self.terms.items():
            if s & t or not self.K.is_face_mask(t):
                continue
            c = _normalize(c, self.coeff)
            if c:
                clean[(s, t)] = c
        self.terms = clean

    # --- construction --------------------------------------------------------

    @classmethod
    def from_terms(cls, K, terms: Iterable, coeff: str = "Q") -> "KoszulCochain":
        """``terms`` are triples (sigma, tau, coef) of 0-based vertex lists."""
        out: dict = {}
        for sigma, tau, c in terms:
            s, t = mask_of(sigma), mask_of(tau)
            if len(set(sigma)) != len(list(sigma)):
                continue
            out[(s, t)] = out.get((s, t), 0) + c
        return cls(K, coeff, out)

    @classmethod
    def parse(cls, K, text: str, coeff: str = "Q") -> "KoszulCochain":
        """Parse sums like ``"y1y4v3 - 2 y1v4v3"`` (1-based indices, y's in the written order)."""
        text = text.replace(" ", "")
        if not text:
            return cls(K, coeff, {})
        if text[0] not in "+-":
            text = "+" + text
        out = cls(K, coeff, {})
        for sign, num, mono in re.findall(r"([+-])(\d*)((?:[yv]\d+(?:_\d+)?)*)", text):
            if not sign:
                continue
            c = int(num) if num else 1
            if sign == "-":
                c = -c
            term = cls.unit(K, coeff).scale(c)
            for kind, idx in re.findall(r"([yv])(\d+(?:_\d+)?)", mono):
                v = _vertex_index(K, idx)
                gen = cls(K, coeff, {((1 << v), 0) if kind == "y" else (0, 1 << v): 1})
                term = cup_product(term, gen)
            out = out + term
        return out

    @classmethod
    def unit(cls, K, coeff: str = "Q") -> "KoszulCochain":
        return cls(K, coeff, {(0, 0): 1})

    @classmethod
    def from_json(cls, K, data: Sequence[dict], coeff: str = "Q") -> "KoszulCochain":
        try:
            terms = [([int(v) - 1 for v in t["sigma"]], [int(v) - 1 for v in t["tau"]], int(t.get("coef", 1))) for t in data]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed cochain JSON: {exc}") from exc
        return cls.from_terms(K, terms, coeff)

    def to_json(self) -> list[dict]:
        out = []
        for (s, t), c in sorted(self.terms.items()):
            out.append({"sigma": [v + 1 for v in members(s)], "tau": [v + 1 for v in members(t)], "coef": _coef_json(c)})
        return out

    # --- arithmetic ------------------------------------------------------------

    def _new(self, terms) -> "KoszulCochain":
        return KoszulCochain(self.K, self.coeff, terms)

    def __add__(self, other: "KoszulCochain") -> "KoszulCochain":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return self._new(out)

    def __neg__(self) -> "KoszulCochain":
        return self.scale(-1)

    def __sub__(self, other: "KoszulCochain") -> "KoszulCochain":
        return self + (-other)

    def __mul__(self, other: "KoszulCochain") -> "KoszulCochain":
        return cup_product(self, other)

    def scale(self, c) -> "KoszulCochain":
        return self._new({k: v * c for k, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, KoszulCochain):
            return NotImplemented
        return self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {popcount(s) + 2 * popcount(t) for s, t in self.terms}

    def degree(self) -> int:
        ds = self.degrees()
        if len(ds) != 1:
            raise InvalidInput("cochain is not homogeneous")
        return ds.pop()

    def multidegrees(self) -> set[int]:
        return {s | t for s, t in self.terms}

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (s, t), c in sorted(self.terms.items()):
            mono = "".join(f"y{self.K.vertex_name(v)}" for v in members(s))
            mono += "".join(f"v{self.K.vertex_name(v)}" for v in members(t))
            parts.append(f"{c}*{mono or '1'}")
        return " + ".join(parts)


def _vertex_index(K: SimplicialComplex, idx: str) -> int:
    if K.labels is not None:
        name = idx.replace("_", ".")
        if name in K.labels:
            return K.labels.index(name)
    if "_" in idx:
        raise InvalidInput(f"unknown vertex label {idx}")
    v = int(idx) - 1
    if not 0 <= v < K.n:
        raise InvalidInput(f"vertex {idx} out of range")
    return v


def _coef_json(c):
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else str(c)
    return c


def differential(c: KoszulCochain) -> KoszulCochain:
    """d(y_sigma v_tau) = sum over i in sigma of (-1)^pos(i, sigma) y_(sigma - i) v_(tau + i)."""
    K = c.K
    out: dict = {}
    for (s, t), coef in c.terms.items():
        rest = s
        while rest:
            low = rest & -rest
            rest ^= low
            t2 = t | low
            if not K.is_face_mask(t2):
                continue
            i = low.bit_length() - 1
            sign = -1 if position(i, s) & 1 else 1
            key = (s ^ low, t2)
            out[key] = out.get(key, 0) + sign * coef
    return KoszulCochain(K, c.coeff, out)


def cup_product(a: KoszulCochain, b: KoszulCochain) -> KoszulCochain:
    """Product of cochains; a basis product vanishes unless all four index sets are disjoint and the v-part is a face."""
    if a.K is not b.K and a.K != b.K:
        raise InvalidInput("cochains live on different complexes")
    if a.coeff != b.coeff:
        raise InvalidInput("cochains use different coefficient rings")
    K = a.K
    out: dict = {}
    for (s1, t1), c1 in a.terms.items():
        for (s2, t2), c2 in b.terms.items():
            if (s1 | t1) & (s2 | t2):
                continue
            t = t1 | t2
            if not K.is_face_mask(t):
                continue
            key = (s1 | s2, t)
            out[key] = out.get(key, 0) + exterior_sign(s1, s2) * c1 * c2
    return KoszulCochain(K, a.coeff, out)


# ---------------------------------------------------------------------------
# cohomology


@dataclass
class CohomologyTable:
    coeff: str
    betti: dict[int, int]
    torsion: dict[int, list[int]]
    bigraded: dict[tuple[int, int], int]
    top_degree: int
    complete_up_to: Optional[int] = None

    def betti_vector(self) -> list[int]:
        return [self.betti.get(k, 0) for k in range(self.top_degree + 1)]

    def total(self) -> int:
        return sum(self.betti.values())

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * b for k, b in self.betti.items())

    def to_json(self) -> dict:
        out = {
            "coeff": self.coeff,
            "betti": {str(k): self.betti.get(k, 0) for k in range(self.top_degree + 1)},
            "torsion": {str(k): v for k, v in sorted(self.torsion.items()) if v},
            "bigraded": [{"i": i, "j": j, "rank": r} for (i, j), r in sorted(self.bigraded.items()) if r],
        }
        if self.complete_up_to is not None:
            out["complete_up_to"] = self.complete_up_to
        return out


def basis_size(K: SimplicialComplex, max_degree: Optional[int] = None) -> int:
    """Number of basis elements  sum over faces tau of 2^(n - |tau|)  (optionally in degrees <= max_degree)."""
    sizes: dict[int, int] = {}
    for f in K.faces():
        k = popcount(f)
        sizes[k] = sizes.get(k, 0) + 1
    total = 0
    for t, cnt in sizes.items():
        free = K.n - t
        if max_degree is None:
            total += cnt * (1 << free)
        else:
            from math import comb

            total += cnt * sum(comb(free, s) for s in range(0, free + 1) if s + 2 * t <= max_degree)
    return total


def _block_faces(K: SimplicialComplex, omega: int, max_size: Optional[int]) -> list[list[int]]:
    """Faces of the full subcomplex on omega grouped by size (size <= max_size)."""
    faces = faces_within(K, omega)
    top = popcount(omega) if max_size is None else min(popcount(omega), max_size)
    by_size: list[list[int]] = [[] for _ in range(top + 1)]
    for f in faces:
        k = popcount(f)
        if k <= top:
            by_size[k].append(f)
    for lst in by_size:
        lst.sort()
    return by_size


def _coboundary_rows(omega: int, src: list[int], dst_index: dict[int, int], want_sign: bool):
    """Rows (one per source face) of the block differential, as {column: entry}."""
    rows = []
    for t in src:
        s = omega & ~t
        row = {}
        rest = s
        while rest:
            low = rest & -rest
            rest ^= low
            j = dst_index.get(t | low)
            if j is None:
                continue
            if want_sign:
                i = low.bit_length() - 1
                row[j] = -1 if position(i, s) & 1 else 1
            else:
                row[j] = 1
        rows.append(row)
    return rows


def integer_rank_and_torsion(rows: list[dict], ncols: int) -> tuple[int, list[int]]:
    """Rank and invariant factors > 1 of a sparse integer matrix.

    Unit pivots are eliminated sparsely (these are unimodular operations, so
    the invariant factors are unchanged); whatever remains goes through a
    dense Smith normal form.
    """
    rows = [dict(r) for r in rows if r]
    col_rows: dict[int, set[int]] = {}
    for idx, r in enumerate(rows):
        for c in r:
            col_rows.setdefault(c, set()).add(idx)
    alive = set(range(len(rows)))
    rank = 0
    # process rows ordered by length, retrying while units exist
    progress = True
    while progress:
        progress = False
        for idx in sorted(alive, key=lambda i: len(rows[i])):
            if idx not in alive:
                continue
            r = rows[idx]
            if not r:
                alive.discard(idx)
                continue
            piv_col = None
            best = None
            for c, v in r.items():
                if v == 1 or v == -1:
                    load = len(col_rows[c])
                    if best is None or load < best:
                        best = load
                        piv_col = c
            if piv_col is None:
                continue
            pv = r[piv_col]
            for other in list(col_rows[piv_col]):
                if other == idx:
                    continue
                s = rows[other]
                f = s[piv_col] * pv  # pv is its own inverse
                for c, v in r.items():
                    nv = s.get(c, 0) - f * v
                    if nv:
                        if c not in s:
                            col_rows[c].add(other)
                        s[c] = nv
                    else:
                        if c in s:
                            del s[c]
                            col_rows[c].discard(other)
                if not s:
                    alive.discard(other)
            for c in r:
                col_rows[c].discard(idx)
            alive.discard(idx)
            rank += 1
            progress = True
    rest = [rows[i] for i in sorted(alive) if rows[i]]
    if not rest:
        return rank, []
    cols = sorted({c for r in rest for c in r})
    where = {c: k for k, c in enumerate(cols)}
    dense = [[0] * len(cols) for _ in rest]
    for i, r in enumerate(rest):
        for c, v in r.items():
            dense[i][where[c]] = v
    inv = smith_invariants(dense)
    return rank + len(inv), [d for d in inv if d > 1]


def _rank(rows: list[dict], ncols: int, coeff: str) -> tuple[int, list[int]]:
    if coeff == "Z2":
        bits = []
        for r in rows:
            m = 0
            for c, v in r.items():
                if v & 1:
                    m |= 1 << c
            if m:
                bits.append(m)
        return kernels.gf2_rank(bits), []
    rank, tors = integer_rank_and_torsion(rows, ncols)
    return rank, (tors if coeff == "Z" else [])


def cohomology(
    K: SimplicialComplex,
    coefficients: str = "Z",
    max_degree: Optional[int] = None,
    cap: int = DEFAULT_CAP,
) -> CohomologyTable:
    """Bigraded cohomology of R(K).

    ``max_degree`` limits the computation to total degrees <= max_degree (the
    table then records ``complete_up_to``).  Raises CapExceeded when the
    number of basis elements in the requested range exceeds ``cap``.
    """
    coeff = _check_coeff(coefficients)
    size = basis_size(K, max_degree)
    if size > cap:
        raise CapExceeded(f"basis of {size} elements exceeds the cap of {cap}", basis_size=size, cap=cap)
    n = K.n
    betti: dict[int, int] = {0: 1}
    torsion: dict[int, list[int]] = {}
    bigraded: dict[tuple[int, int], int] = {(0, 0): 1}
    for omega in range(1, 1 << n):
        w = popcount(omega)
        if max_degree is not None and w > max_degree:
            continue
        if K.is_face_mask(omega):
            continue
        max_size = None if max_degree is None else max_degree - w + 1
        for t, h, tors in _block_cohomology(K, omega, coeff, max_size):
            _record(betti, torsion, bigraded, w + t, t - w, 2 * w, h, tors, max_degree)
    return _table(coeff, betti, torsion, bigraded, max_degree)


def _block_cohomology(K: SimplicialComplex, omega: int, coeff: str, max_size: Optional[int]):
    """(t, rank, torsion) for the block of multidegree omega, by face size t.

    Face size t carries the reduced cohomology of the full subcomplex on
    omega in degree t - 1.  With ``max_size`` set, sizes above it are left
    out, as is the top size whose outgoing map was not built.
    """
    by_size = _block_faces(K, omega, max_size)
    index = [{f: k for k, f in enumerate(lst)} for lst in by_size]
    signed = coeff != "Z2"
    ranks = []
    tors = []
    for t in range(len(by_size) - 1):
        rows = _coboundary_rows(omega, by_size[t], index[t + 1], signed)
        r, tr = _rank(rows, len(by_size[t + 1]), coeff)
        ranks.append(r)
        tors.append(tr)
    out = []
    for t in range(len(by_size)):
        if t == len(by_size) - 1 and max_size is not None and t == max_size:
            continue  # outgoing map not computed
        out_rank = ranks[t] if t < len(ranks) else 0
        in_rank = ranks[t - 1] if t >= 1 else 0
        h = len(by_size[t]) - out_rank - in_rank
        tr = tors[t - 1] if t >= 1 else []
        if h or tr:
            out.append((t, h, tr))
    return out


def _record(betti, torsion, bigraded, deg, i, j, h, tors, max_degree):
    if max_degree is not None and deg > max_degree:
        return
    if h:
        betti[deg] = betti.get(deg, 0) + h
        bigraded[(i, j)] = bigraded.get((i, j), 0) + h
    if tors:
        torsion.setdefault(deg, []).extend(tors)


def _table(coeff, betti, torsion, bigraded, max_degree):
    for v in torsion.values():
        v.sort()
    top = max(betti) if max_degree is None else max_degree
    top = max(top, max(betti))
    return CohomologyTable(coeff, betti, torsion, bigraded, top, complete_up_to=max_degree)


def wedge_cohomology(
    K: SimplicialComplex,
    multiplicities: Sequence[int],
    coefficients: str = "Z",
    max_degree: Optional[int] = None,
) -> CohomologyTable:
    """Cohomology of R(K(J)) for the multiwedge K(J), computed on K itself.

    A full subcomplex of K(J) that takes only part of some class of copies
    has a cone point and contributes nothing.  One made of whole classes S
    is an iterated suspension of K_S, shifted by s = sum over S of (j_i - 1).
    So each block of K contributes its classes moved from face size t to
    t + s, in total degree |S| + t + 2s.
    """
    coeff = _check_coeff(coefficients)
    J = [int(j) for j in multiplicities]
    if len(J) != K.n or any(j < 1 for j in J):
        raise InvalidInput("need one positive multiplicity per vertex")
    if K.n > 24:
        raise CapExceeded("wedge cohomology enumerates subsets of the base: n <= 24", n=K.n)
    betti: dict[int, int] = {0: 1}
    torsion: dict[int, list[int]] = {}
    bigraded: dict[tuple[int, int], int] = {(0, 0): 1}
    for omega in range(1, 1 << K.n):
        if K.is_face_mask(omega):
            continue
        w = popcount(omega)
        size = sum(J[v] for v in members(omega))
        shift = size - w
        if max_degree is not None and size > max_degree:
            continue
        max_size = None if max_degree is None else max_degree - size + 1 - shift
        if max_size is not None and max_size < 0:
            continue
        for t, h, tors in _block_cohomology(K, omega, coeff, max_size):
            _record(betti, torsion, bigraded, w + t + 2 * shift, t + shift - size, 2 * size, h, tors, max_degree)
    return _table(coeff, betti, torsion, bigraded, max_degree)


def total_ungraded_dimension(K: SimplicialComplex, coefficients: str = "Q", cap: int = DEFAULT_CAP) -> int:
    return cohomology(K, coefficients, cap=cap).total()


# ---------------------------------------------------------------------------
# dense reference computation


def full_basis(K: SimplicialComplex) -> list[tuple[int, int]]:
    out = []
    full = K.full_mask
    for t in K.faces():
        rest = full & ~t
        s = rest
        while True:
            out.append((s, t))
            if s == 0:
                break
            s = (s - 1) & rest
    out.sort(key=lambda st: (popcount(st[0]) + 2 * popcount(st[1]), st))
    return out


def dense_betti_q(K: SimplicialComplex) -> dict[int, int]:
    """Betti numbers over Q from the whole differential as dense matrices (small n only)."""
    if K.n > 6:
        raise CapExceeded("dense reference computation is limited to n <= 6", n=K.n)
    basis = full_basis(K)
    by_deg: dict[int, list[tuple[int, int]]] = {}
    for s, t in basis:
        by_deg.setdefault(popcount(s) + 2 * popcount(t), []).append((s, t))
    ranks = {}
    for deg, elems in by_deg.items():
        target = by_deg.get(deg + 1, [])
        where = {e: k for k, e in enumerate(target)}
        M = []
        for s, t in elems:
            img = differential(KoszulCochain(K, "Q", {(s, t): 1}))
            row = [0] * len(target)
            for key, c in img.terms.items():
                row[where[key]] = c
            M.append(row)
        ranks[deg] = rank_q(M) if M and target else 0
    out = {}
    for deg, elems in by_deg.items():
        h = len(elems) - ranks[deg] - ranks.get(deg - 1, 0)
        if h:
            out[deg] = h
    return out


# ---------------------------------------------------------------------------
# cocycles and coboundaries in one multidegree


def block_basis(K: SimplicialComplex, omega: int) -> list[tuple[int, int]]:
    """Basis elements of multidegree omega, as (sigma, tau)."""
    return [(omega & ~t, t) for t in sorted(faces_within(K, omega))]


def is_cocycle(c: KoszulCochain) -> bool:
    return differential(c).is_zero()
