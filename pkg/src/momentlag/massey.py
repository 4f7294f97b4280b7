"""Triple Massey products in R(K) over Q or Z/2."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import CapExceeded, InvalidInput, NotCocycle
from .face_ring import SimplicialComplex, faces_within, popcount
from .koszul import KoszulCochain, cup_product, differential

FIELD_COEFFS = ("Q", "Z2")


class _Span:
    """Incrementally reduced spanning set over Q or Z/2, with optional bookkeeping.

    Vectors are dicts keyed by basis elements.  Each stored vector remembers
    which combination of the inserted generators produced it, so that later
    membership queries can also return coefficients.
    """

    def __init__(self, coeff: str, track: bool = False):
        self.coeff = coeff
        self.track = track
        self.rows: dict = {}  # pivot key -> (vector, combination)

    def _mod(self, x):
        return x % 2 if self.coeff == "Z2" else x

    def reduce(self, vec: dict, combo: Optional[dict] = None):
        vec = {k: self._mod(v) for k, v in vec.items() if self._mod(v)}
        combo = dict(combo or {})
        while vec:
            key = min(vec)
            if key not in self.rows:
                return vec, combo, key
            row, rc = self.rows[key]
            f = vec[key] if self.coeff == "Z2" else Fraction(vec[key]) / row[key]
            for k, v in row.items():
                nv = self._mod(vec.get(k, 0) - f * v)
                if nv:
                    vec[k] = nv
                else:
                    vec.pop(k, None)
            if self.track:
                for k, v in rc.items():
                    nv = self._mod(combo.get(k, 0) - f * v)
                    if nv:
                        combo[k] = nv
                    else:
                        combo.pop(k, None)
        return vec, combo, None

    def add(self, vec: dict, label=None) -> bool:
        combo = {label: 1} if self.track else {}
        rest, combo, key = self.reduce(vec, combo)
        if key is None:
            return False
        self.rows[key] = (rest, combo)
        return True

    def contains(self, vec: dict) -> bool:
        rest, _, _ = self.reduce(vec)
        return not rest

    def express(self, vec: dict) -> Optional[dict]:
        """Coefficients c with  sum c_label * generator_label = vec, or None."""
        rest, combo, _ = self.reduce(vec)
        if rest:
            return None
        return {k: -v if self.coeff != "Z2" else v for k, v in combo.items() if v}

    def __len__(self) -> int:
        return len(self.rows)


@dataclass
class MasseyResult:
    defined: bool
    representative: Optional[KoszulCochain]
    indeterminacy_basis: list = field(default_factory=list)
    nontrivial: bool = False
    h: Optional[KoszulCochain] = None
    g: Optional[KoszulCochain] = None
    reason: str = ""

    def to_json(self) -> dict:
        return {
            "defined": self.defined,
            "nontrivial": self.nontrivial,
            "representative": self.representative.to_json() if self.representative is not None else None,
            "h": self.h.to_json() if self.h is not None else None,
            "g": self.g.to_json() if self.g is not None else None,
            "indeterminacy_dimension": len(self.indeterminacy_basis),
            "reason": self.reason,
        }


def _degree_elements(K: SimplicialComplex, omega: int, degree: int) -> list[tuple[int, int]]:
    """Basis elements of multidegree omega and total degree ``degree``."""
    t = degree - popcount(omega)
    if t < 0:
        return []
    return [(omega & ~f, f) for f in sorted(faces_within(K, omega)) if popcount(f) == t]


def _by_multidegree(c: KoszulCochain) -> dict[int, dict]:
    out: dict[int, dict] = {}
    for (s, t), v in c.terms.items():
        out.setdefault(s | t, {})[(s, t)] = v
    return out


def solve_coboundary(target: KoszulCochain) -> Optional[KoszulCochain]:
    """A cochain h with d(h) = target, or None.

    The differential preserves multidegree, so each component of the target
    is solved inside its own block.  Generators are taken in sorted basis
    order, which makes the returned solution deterministic.
    """
    K, coeff = target.K, target.coeff
    if target.is_zero():
        return KoszulCochain(K, coeff, {})
    deg = target.degree()
    out: dict = {}
    for omega, comp in sorted(_by_multidegree(target).items()):
        span = _Span(coeff, track=True)
        for e in _degree_elements(K, omega, deg - 1):
            span.add(differential(KoszulCochain(K, coeff, {e: 1})).terms, label=e)
        combo = span.express(comp)
        if combo is None:
            return None
        for e, v in combo.items():
            out[e] = out.get(e, 0) + v
    return KoszulCochain(K, coeff, out)


def _cocycle_basis(K, coeff, omega: int, degree: int) -> list[dict]:
    """Basis of the cocycles of multidegree omega and the given degree."""
    elems = _degree_elements(K, omega, degree)
    if not elems:
        return []
    # kernel of d restricted to these elements, by elimination on images
    span = _Span(coeff, track=True)
    kernel = []
    for e in elems:
        img = differential(KoszulCochain(K, coeff, {e: 1})).terms
        rest, combo, key = span.reduce(img, {e: 1})
        if key is None:
            kernel.append(combo)
        else:
            span.rows[key] = (rest, combo)
    return kernel


def _check_inputs(a, b, c, coeff):
    if coeff not in FIELD_COEFFS:
        raise InvalidInput("Massey products are computed over Q or Z2")
    for name, x in (("a", a), ("b", b), ("c", c)):
        if x.coeff != coeff:
            raise InvalidInput(f"cochain {name} uses coefficients {x.coeff}, expected {coeff}")
        if not differential(x).is_zero():
            raise NotCocycle(f"input {name} is not a cocycle", cochain=name)
        if len(x.degrees()) > 1:
            raise InvalidInput(f"input {name} is not homogeneous")


def triple_massey(
    a: KoszulCochain,
    b: KoszulCochain,
    c: KoszulCochain,
    coefficients: str = "Q",
    h: Optional[KoszulCochain] = None,
    g: Optional[KoszulCochain] = None,
) -> MasseyResult:
    """The Massey product <a, b, c> with representative  a g - (-1)^deg(a) h c.

    ``h`` and ``g`` (with d h = a b and d g = b c) may be supplied; otherwise
    the deterministic solutions of :func:`solve_coboundary` are used.
    Nontriviality means the representative is not in
    B + a * Z + Z * c  (coboundaries plus the indeterminacy).
    """
    coeff = coefficients
    _check_inputs(a, b, c, coeff)
    ab = cup_product(a, b)
    bc = cup_product(b, c)
    if h is None:
        h = solve_coboundary(ab)
    elif differential(h) != ab:
        raise InvalidInput("supplied h does not satisfy d h = a b")
    if g is None:
        g = solve_coboundary(bc)
    elif differential(g) != bc:
        raise InvalidInput("supplied g does not satisfy d g = b c")
    if h is None or g is None:
        which = "a b" if h is None else "b c"
        return MasseyResult(False, None, [], False, h, g, reason=f"{which} is not a coboundary")
    deg_a = a.degree() if not a.is_zero() else 0
    sign = -1 if deg_a % 2 else 1
    rep = cup_product(a, g) - cup_product(h, c).scale(sign)
    if not differential(rep).is_zero():
        raise AssertionError("Massey representative is not a cocycle")
    if rep.is_zero():
        return MasseyResult(True, rep, [], False, h, g, reason="representative vanishes")
    deg = rep.degree()
    nontrivial, indet = _outside_indeterminacy(rep, a, c, deg)
    return MasseyResult(True, rep, indet, nontrivial, h, g, reason="" if nontrivial else "representative lies in the indeterminacy")


def _outside_indeterminacy(rep: KoszulCochain, a: KoszulCochain, c: KoszulCochain, deg: int):
    """Decide rep not in  B + a Z + Z c  in the degree of rep."""
    K, coeff = rep.K, rep.coeff
    deg_a = a.degree() if not a.is_zero() else 0
    deg_c = c.degree() if not c.is_zero() else 0
    a_parts = sorted(_by_multidegree(a))
    c_parts = sorted(_by_multidegree(c))
    targets = set(_by_multidegree(rep))
    # blocks any generator can touch
    blocks = set(targets)
    products = []
    for parts, left, other_deg in ((a_parts, True, deg - deg_a), (c_parts, False, deg - deg_c)):
        factor = a if left else c
        if len(a_parts) == 1 and len(c_parts) == 1:
            # every product sits in one block, so only the target blocks matter
            sources = {omega & ~p for omega in targets for p in parts if p & omega == p}
        else:
            if K.n > 12:
                raise CapExceeded("indeterminacy for inputs spread over several multidegrees needs n <= 12", n=K.n)
            sources = {w for w in range(1 << K.n) if any(not w & p for p in parts)}
        for src in sorted(sources):
            for z in _cocycle_basis(K, coeff, src, other_deg):
                zc = KoszulCochain(K, coeff, z)
                prod = cup_product(factor, zc) if left else cup_product(zc, factor)
                if not prod.is_zero():
                    products.append(prod)
                    blocks.update(_by_multidegree(prod))
    span = _Span(coeff)
    for omega in sorted(blocks):
        for e in _degree_elements(K, omega, deg - 1):
            span.add(differential(KoszulCochain(K, coeff, {e: 1})).terms)
    indet = []
    for prod in products:
        if span.add(prod.terms):
            indet.append(prod)
    return (not span.contains(rep.terms)), indet
