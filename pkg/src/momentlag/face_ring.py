"""Simplicial complexes stored by their minimal non-faces.

Vertices are ``0..n-1`` internally; the JSON form is 1-based.  Subsets are
handled as ``int`` bitmasks throughout, which is what the DGA code consumes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

from .errors import InvalidInput, NoNonface


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def members(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def _minimalize(masks: Iterable[int]) -> list[int]:
    ms = sorted(set(masks), key=lambda x: (popcount(x), x))
    keep: list[int] = []
    # distinct sets of equal size never contain each other, so each mask is
    # only compared with kept masks of strictly smaller size
    smaller: list[int] = []
    pending: list[int] = []
    size = -1
    for m in ms:
        c = popcount(m)
        if c != size:
            smaller.extend(pending)
            pending = []
            size = c
        if not any(k & m == k for k in smaller):
            keep.append(m)
            pending.append(m)
    return keep


@dataclass(frozen=True)
class SimplicialComplex:
    n: int
    min_nonfaces: tuple[tuple[int, ...], ...]
    labels: Optional[tuple[str, ...]] = None
    _masks: tuple[int, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        nf = tuple(sorted(tuple(sorted(f)) for f in self.min_nonfaces))
        for f in nf:
            if any(v < 0 or v >= self.n for v in f):
                raise InvalidInput("non-face vertex out of range", nonface=list(f))
        masks = [mask_of(f) for f in nf]
        if len(_minimalize(masks)) != len(set(masks)):
            raise InvalidInput("minimal non-faces must form an antichain")
        nf = tuple(sorted(set(nf), key=lambda f: (len(f), f)))
        object.__setattr__(self, "min_nonfaces", nf)
        object.__setattr__(self, "_masks", tuple(mask_of(f) for f in nf))
        if self.labels is not None and len(self.labels) != self.n:
            raise InvalidInput("label count does not match vertex count")

    @property
    def nonface_masks(self) -> tuple[int, ...]:
        return self._masks

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    # --- constructors -----------------------------------------------------

    @classmethod
    def from_nonfaces(cls, n: int, nonfaces: Iterable[Iterable[int]], labels=None) -> "SimplicialComplex":
        masks = _minimalize(mask_of(f) for f in nonfaces)
        return cls(n, tuple(tuple(members(m)) for m in masks), labels)

    @classmethod
    def from_facets(cls, n: int, facets: Iterable[Iterable[int]], labels=None) -> "SimplicialComplex":
        """Complex generated by the given maximal faces."""
        fmasks = [mask_of(f) for f in facets]
        masks = _minimalize(_nonfaces_from_facets(n, fmasks))
        return cls(n, tuple(tuple(members(m)) for m in masks), labels)

    @classmethod
    def boundary_of_simplex(cls, n: int) -> "SimplicialComplex":
        return cls(n, (tuple(range(n)),))

    @classmethod
    def polygon(cls, m: int) -> "SimplicialComplex":
        if m == 3:
            return cls(3, ((0, 1, 2),))
        nf = [(i, j) for i in range(m) for j in range(i + 2, m) if not (i == 0 and j == m - 1)]
        return cls(m, tuple(nf))

    # --- queries -----------------------------------------------------------

    def is_face_mask(self, mask: int) -> bool:
        for nf in self._masks:
            if nf & mask == nf:
                return False
        return True

    def faces(self, within: Optional[int] = None) -> list[int]:
        """All faces (as masks) contained in ``within`` (default: everything)."""
        if within is None:
            within = self.full_mask
        return faces_within(self, within)

    def facets(self) -> list[int]:
        fs = self.faces()
        fset = set(fs)
        out = []
        for f in fs:
            if all((f | (1 << v)) not in fset for v in range(self.n) if not f >> v & 1):
                out.append(f)
        return sorted(out)

    def ghost_vertices(self) -> list[int]:
        return [f[0] for f in self.min_nonfaces if len(f) == 1]

    def dimension(self) -> int:
        return max(popcount(f) for f in self.facets()) - 1

    def to_json(self) -> dict:
        out = {"n": self.n, "min_nonfaces": [[v + 1 for v in f] for f in self.min_nonfaces]}
        if self.labels is not None:
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "SimplicialComplex":
        try:
            n = int(data["n"])
            nf = [[int(v) - 1 for v in f] for f in data["min_nonfaces"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed simplicial complex JSON: {exc}") from exc
        labels = tuple(data["labels"]) if data.get("labels") is not None else None
        return cls.from_nonfaces(n, nf, labels)

    def vertex_name(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v + 1)


def faces_within(K: SimplicialComplex, within: int) -> list[int]:
    """Faces contained in the vertex set ``within``, in generation order.

    Built one vertex at a time; adding ``v`` to a face only needs to test the
    non-faces that contain ``v``.
    """
    relevant = [nf for nf in K.nonface_masks if nf & within == nf]
    by_vertex: dict[int, list[int]] = {}
    for nf in relevant:
        for v in members(nf):
            by_vertex.setdefault(v, []).append(nf)
    faces = [0]
    for v in members(within):
        bit = 1 << v
        checks = by_vertex.get(v, ())
        new = []
        for f in faces:
            g = f | bit
            ok = True
            for nf in checks:
                if nf & g == nf:
                    ok = False
                    break
            if ok:
                new.append(g)
        faces.extend(new)
    return faces


def _nonfaces_from_facets(n: int, facet_masks: Sequence[int]) -> list[int]:
    """Minimal subsets not contained in any facet."""
    def is_face(mask):
        return any(mask & f == mask for f in facet_masks)

    found = []
    faces = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for f in frontier:
            top = f.bit_length()
            for v in range(top, n):
                g = f | (1 << v)
                if is_face(g):
                    faces.add(g)
                    nxt.append(g)
                else:
                    # minimal iff every codimension-one subset is a face
                    if all((g & ~(1 << u)) in faces or is_face(g & ~(1 << u)) for u in members(g)):
                        found.append(g)
        frontier = nxt
    return found


def is_face(K: SimplicialComplex, tau: Iterable[int]) -> bool:
    """True iff no minimal non-face of ``K`` lies inside ``tau`` (0-based)."""
    tau = list(tau)
    if any(v < 0 or v >= K.n for v in tau):
        raise InvalidInput("vertex out of range")
    return K.is_face_mask(mask_of(tau))


def m_number(K: SimplicialComplex) -> int:
    """Smallest number of facets with empty common intersection."""
    if not K.min_nonfaces:
        raise NoNonface("the complex is a full simplex")
    return min(len(f) for f in K.min_nonfaces)


def wedge_complex(K: SimplicialComplex, J: Sequence[int]) -> SimplicialComplex:
    """Simplicial multiwedge: vertex ``i`` becomes ``J[i]`` vertices.

    New vertices are the pairs ``(i, c)`` in lexicographic order, labelled
    ``"i.c"`` (1-based, composing with existing labels).  Each minimal non-face
    turns into the union of all copies of its vertices.
    """
    J = [int(j) for j in J]
    if len(J) != K.n:
        raise InvalidInput("multiplicity vector length does not match vertex count")
    if any(j < 1 for j in J):
        raise InvalidInput("multiplicities must be positive")
    offsets = [0]
    for j in J:
        offsets.append(offsets[-1] + j)
    labels = []
    for i, j in enumerate(J):
        base = K.vertex_name(i)
        for c in range(j):
            labels.append(base if j == 1 else f"{base}.{c + 1}")
    nf = []
    for f in K.min_nonfaces:
        nf.append(tuple(v for i in f for v in range(offsets[i], offsets[i + 1])))
    return SimplicialComplex(offsets[-1], tuple(nf), tuple(labels))


def wedge_groups(J: Sequence[int]) -> list[list[int]]:
    """Vertex copies belonging to each original vertex after ``wedge_complex``."""
    out = []
    start = 0
    for j in J:
        out.append(list(range(start, start + j)))
        start += j
    return out


def join(K: SimplicialComplex, L: SimplicialComplex) -> SimplicialComplex:
    nf = list(K.min_nonfaces) + [tuple(v + K.n for v in f) for f in L.min_nonfaces]
    return SimplicialComplex(K.n + L.n, tuple(nf))


def relabel(K: SimplicialComplex, perm: Sequence[int]) -> SimplicialComplex:
    """Image of ``K`` under the vertex map ``v -> perm[v]``."""
    return SimplicialComplex.from_nonfaces(K.n, [[perm[v] for v in f] for f in K.min_nonfaces])


def find_isomorphism(
    K: SimplicialComplex,
    L: SimplicialComplex,
    colors_k: Optional[Sequence] = None,
    colors_l: Optional[Sequence] = None,
) -> Optional[list[int]]:
    """A vertex bijection ``perm`` with ``relabel(K, perm) == L``, or None.

    Optional vertex colours must be preserved.  Backtracking over vertices
    with a degree/colour signature prune; meant for the small base complexes
    used by the family registry.
    """
    if K.n != L.n or len(K.min_nonfaces) != len(L.min_nonfaces):
        return None
    colors_k = list(colors_k) if colors_k is not None else [0] * K.n
    colors_l = list(colors_l) if colors_l is not None else [0] * L.n

    def signature(C, colors, v):
        sizes = sorted(len(f) for f in C.min_nonfaces if v in f)
        return (colors[v], tuple(sizes))

    sig_k = [signature(K, colors_k, v) for v in range(K.n)]
    sig_l = [signature(L, colors_l, v) for v in range(L.n)]
    if sorted(sig_k) != sorted(sig_l):
        return None
    target = set(L.nonface_masks)
    order = sorted(range(K.n), key=lambda v: sig_k[v])
    perm = [-1] * K.n
    used = [False] * L.n

    def consistent(upto: int) -> bool:
        assigned = {order[i] for i in range(upto)}
        for f in K.min_nonfaces:
            if all(v in assigned for v in f):
                if mask_of(perm[v] for v in f) not in target:
                    return False
        return True

    def rec(idx: int) -> bool:
        if idx == K.n:
            return True
        v = order[idx]
        for w in range(L.n):
            if not used[w] and sig_l[w] == sig_k[v]:
                perm[v] = w
                used[w] = True
                if consistent(idx + 1) and rec(idx + 1):
                    return True
                used[w] = False
                perm[v] = -1
        return False

    if rec(0):
        return perm
    return None


def iter_subsets(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` (including 0 and ``mask``)."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def subsets_of_size(n: int, k: int) -> Iterator[int]:
    for combo in itertools.combinations(range(n), k):
        yield mask_of(combo)
