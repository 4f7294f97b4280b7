"""Certificates for the monotone Lagrangian attached to a quadric system.

Everything here is bookkeeping on top of exact predicates: each reported
field carries the list of checks ("hypothesis trail") that produced it, and
statements the computation cannot decide are labelled as such rather than
omitted or guessed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Callable, Optional

from .errors import CapExceeded, InvalidInput, MomentLagError, NotCPForm
from .exact_linalg import hnf_basis, solve_q, transpose, vector_gcd
from .face_ring import SimplicialComplex, find_isomorphism, m_number, popcount, wedge_complex
from .koszul import basis_size, cohomology
from .quadrics import (
    QuadricSystem,
    class_complex,
    cp_normal_form,
    embeddedness_check,
    fano_constant,
    is_smooth_nonempty,
    quadrics_nerve,
)
from .real_complex import integral_vanishing_range_check, z2_betti_real, z2_betti_real_quotient

VERIFIED = "VERIFIED"
ASSERTED = "ASSERTED"
UNVERIFIED = "UNVERIFIED"

FIBER_BASIS_CAP = 2_000_000
REAL_CELL_CAP = 100_000


# ---------------------------------------------------------------------------
# multiplicities of distinct columns


def class_multiplicities(QS: QuadricSystem) -> list[int]:
    return [len(vs) for _, vs in QS.classes()]


def is_even_wedge(QS: QuadricSystem) -> bool:
    """Every distinct column occurs an even number of times.

    Then the system is the doubling of a half system and the real
    moment-angle manifold is a complex one.
    """
    return all(j % 2 == 0 for j in class_multiplicities(QS))


def half_complex(QS: QuadricSystem) -> SimplicialComplex:
    """Nerve of the half system Q for an even wedge (multiplicities halved)."""
    if not is_even_wedge(QS):
        raise InvalidInput("the system is not an even wedge")
    base = class_complex(QS)
    return wedge_complex(base, [j // 2 for j in class_multiplicities(QS)])


# ---------------------------------------------------------------------------
# monotonicity


@dataclass
class MonotoneCertificate:
    monotone: bool
    failing: list[str]
    ambient_dim: int
    torus_rank: int
    fano_constant: Optional[Fraction]
    trail: list[str]


SUM_ZERO = "Σaᵢ = 0"
DELZANT = "Delzant (lattice embeddedness)"
FANO = "Fano (Σγ̃ⱼ = Cδ)"


def monotone_certificate(QS: QuadricSystem) -> MonotoneCertificate:
    if not is_smooth_nonempty(QS):
        raise InvalidInput("the quadric system is empty or singular")
    failing = []
    trail = ["variety nonempty and smooth (delta interior to every feasible basis)"]
    try:
        cp = cp_normal_form(QS)
        trail.append(f"{SUM_ZERO}: first quadric u_1^2+...+u_n^2 = {cp.delta[0]} in the row space")
    except NotCPForm:
        failing.append(SUM_ZERO)
        trail.append(f"{SUM_ZERO} fails: all-ones vector not in the row space of Gamma")
    if embeddedness_check(QS):
        trail.append(f"{DELZANT}: lattice generated off every face equals the full lattice")
    else:
        failing.append(DELZANT)
        trail.append(f"{DELZANT} fails: some face drops the column lattice")
    C = fano_constant(QS)
    if C is not None:
        trail.append(f"{FANO}: column sum = {C} * delta")
    else:
        failing.append(FANO)
        trail.append(f"{FANO} fails: column sum not a positive multiple of delta")
    return MonotoneCertificate(
        monotone=not failing,
        failing=failing,
        ambient_dim=QS.n - 1,
        torus_rank=QS.rows - 1,
        fano_constant=C,
        trail=trail,
    )


# ---------------------------------------------------------------------------
# Maslov number


@dataclass
class MaslovResult:
    value: Optional[int]
    status: str
    trail: list[str]

    def to_json(self) -> dict:
        return {"value": self.value, "status": self.status, "trail": self.trail}


def minimal_maslov(QS: QuadricSystem, assume_simply_connected_fiber: bool = False) -> MaslovResult:
    """Minimal Maslov number as a gcd of Maslov values on a lattice basis.

    With ``B`` a basis of the column lattice, the column sum ``C delta``
    written in that basis has coordinates whose gcd is the answer; this is
    ``gcd(C delta_i)`` when the columns generate Z^(n-m).
    """
    cert = monotone_certificate(QS)
    trail = list(cert.trail)
    if not cert.monotone:
        return MaslovResult(None, UNVERIFIED, trail + ["not monotone: no minimal Maslov number"])
    C = cert.fano_constant
    target = [C * d for d in QS.delta]
    basis = hnf_basis([list(c) for c, _ in QS.classes()])
    coords = solve_q(transpose(basis), target)
    if coords is None or any(x.denominator != 1 for x in coords):
        raise AssertionError("column sum is not in the column lattice")
    ints = [int(x) for x in coords]
    value = abs(vector_gcd(ints))
    trail.append(f"C = {C}")
    trail.append("gcd(" + ",".join(str(abs(x)) for x in ints) + ")")
    if is_even_wedge(QS):
        status = VERIFIED
        trail.append("fiber is a complex moment-angle manifold (even wedge): simply connected")
    elif assume_simply_connected_fiber:
        status = ASSERTED
        trail.append("simply connected fiber asserted by the user")
    else:
        status = UNVERIFIED
        trail.append("simple connectivity of the fiber not verified")
    return MaslovResult(value, status, trail)


# ---------------------------------------------------------------------------
# topology of L


def is_two_simplex_product(QS: QuadricSystem) -> bool:
    """The nerve is the join of two simplex boundaries (two disjoint non-faces covering all vertices)."""
    K = quadrics_nerve(QS)
    nf = K.nonface_masks
    return len(nf) == 2 and nf[0] & nf[1] == 0 and nf[0] | nf[1] == K.full_mask


def spin_orientability(QS: QuadricSystem) -> tuple[str, str, list[str]]:
    n = QS.n
    if is_even_wedge(QS):
        spin = "yes" if (n // 2) % 2 == 0 else "no"
        return spin, "yes", [f"even wedge: orientable; spin iff n/2 = {n // 2} is even"]
    if is_two_simplex_product(QS) and n % 4 == 0:
        return "yes", "unknown", [f"product of two simplices with n = {n} divisible by 4: spin"]
    return "unknown", "unknown", ["not an even wedge: spin and orientability not decided"]


def fibration_triviality(QS: QuadricSystem) -> tuple[str, list[str]]:
    mults = class_multiplicities(QS)
    if all(j % 2 == 0 for j in mults):
        return "yes", [f"all multiplicities {sorted(set(mults))} even: fibration over the torus is trivial"]
    return "unknown", ["some multiplicity is odd: triviality not decided"]


def real_cell_count(K: SimplicialComplex) -> int:
    return sum(1 << (K.n - popcount(f)) for f in K.faces())


def fiber_betti(QS: QuadricSystem, cap: int = FIBER_BASIS_CAP) -> dict:
    """Betti data of the fiber R/Z2 and its double cover R, where computable."""
    out: dict = {}
    K = quadrics_nerve(QS)
    if K.n <= 12 and real_cell_count(K) <= REAL_CELL_CAP:
        out["cover_z2"] = z2_betti_real(K)
        out["quotient_z2"] = z2_betti_real_quotient(K)
    if is_even_wedge(QS):
        H = half_complex(QS)
        if basis_size(H) <= cap:
            out["cover_z"] = cohomology(H, "Z", cap=cap).betti_vector()
        else:
            out["cover_z"] = "not computed: basis exceeds cap"
    return out


def surface_genus(betti: list[int]) -> Optional[int]:
    if len(betti) == 3 and betti[0] == 1 and betti[2] == 1 and betti[1] % 2 == 0:
        return betti[1] // 2
    return None


def pi1_summary(QS: QuadricSystem) -> tuple[str, list[str]]:
    r = QS.rows - 1
    mults = class_multiplicities(QS)
    if r == 0:
        return "Z_2", ["single quadric: L = RP^{n-1}"]
    if all(j >= 2 for j in mults) and is_even_wedge(QS):
        return f"Z_2 ⊕ Z^{r}", ["even wedge: fiber simply connected, the extension splits"]
    K = quadrics_nerve(QS)
    fiber = "R̃_P/Z_2"
    trail = ["fiber fundamental group not determined"]
    if K.n <= 12:
        g = surface_genus(z2_betti_real(K))
        if g is not None and QS.m == 2:
            fiber = f"S_{g}/Z_2"
            trail = [f"fiber cover is an orientable surface of genus {g} (Z2 Betti numbers)"]
    return f"1 → π_1({fiber}) → π_1(L) → π_1(T^{r}) → 1", trail


# ---------------------------------------------------------------------------
# registered families with known quantum cohomology


@dataclass
class Family:
    name: str
    base: Callable[[], SimplicialComplex]
    colours: Callable[[list[int]], Optional[list]]
    verdict: str
    condition: str


def _hexagon_colours(mults):
    if len(set(mults)) != 1 or mults[0] % 2:
        return None
    k = mults[0] // 2
    return [("k", k)] * 6 if k >= 2 else None


def _double_cut_colours(mults):
    small = min(mults)
    if small % 2:
        return None
    k = small // 2
    if k < 2 or sorted(mults) != [2 * k] * 6 + [4 * k] * 2:
        return None
    return [("cube", k)] * 6 + [("cut", k)] * 2


def _prod_colours(mults):
    if len(mults) != 2 or mults[0] != mults[1] or mults[0] % 2 == 0:
        return None
    return [("p", mults[0])] * 2


@lru_cache(maxsize=None)
def _double_cut_nerve() -> SimplicialComplex:
    """Nerve of the cube with the vertices (1,1,1) and (-1,-1,-1) cut off."""
    from .polytope import Polytope, nerve

    normals = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, 0, 0), (0, -1, 0), (0, 0, -1), (-1, -1, -1), (1, 1, 1)]
    P = Polytope.from_normals(normals, [1, 1, 1, 1, 1, 1, 2, 2])
    return nerve(P)


FAMILIES = [
    Family(
        "hexagon wedge",
        lambda: SimplicialComplex.polygon(6),
        _hexagon_colours,
        "narrow over Z2: QH(L, Z2[T,T^-1]) = 0",
        "hexagon with all multiplicities 2k, k >= 2",
    ),
    Family(
        "double-cut cube wedge",
        _double_cut_nerve,
        _double_cut_colours,
        "narrow over Z2: QH(L, Z2[T,T^-1]) = 0",
        "cube with two opposite vertices cut, multiplicities 2k on cube facets and 4k on the cuts, k >= 2",
    ),
    Family(
        "product of two simplices",
        lambda: SimplicialComplex(2, ((0,), (1,))),
        _prod_colours,
        "wide over Z2: QH(L, Z2[T,T^-1]) ≅ H(L, Z2[T,T^-1])",
        "classes of sizes p and n - p with n = 2p, p odd",
    ),
]


def match_family(QS: QuadricSystem) -> Optional[tuple[Family, list[int]]]:
    K = class_complex(QS)
    mults = class_multiplicities(QS)
    for fam in FAMILIES:
        base = fam.base()
        if base.n != K.n:
            continue
        target = fam.colours(mults)
        if target is None:
            continue
        # colour each class by its multiplicity and each base vertex by the
        # multiplicity the family prescribes for it
        scale = {"k": 2, "cube": 2, "cut": 4, "p": 1}
        colours_l = [scale[t] * kk for t, kk in target]
        perm = find_isomorphism(K, base, mults, colours_l)
        if perm is not None:
            return fam, perm
    return None


# ---------------------------------------------------------------------------
# narrowness


def _verdict(vid, statement, status, trail):
    return {"id": vid, "statement": statement, "status": status, "trail": trail}


def narrowness_report(
    QS: QuadricSystem,
    assume_simply_connected_fiber: bool = False,
    maslov: Optional[MaslovResult] = None,
) -> list[dict]:
    cert = monotone_certificate(QS)
    verdicts = []
    gates = []
    if not cert.monotone:
        gates.append("not monotone: " + ", ".join(cert.failing))
    even = is_even_wedge(QS)
    if not even:
        gates.append("not an even wedge: R̃_P is not a complex moment-angle manifold")
    Q = None
    if even:
        Q = half_complex(QS)
        if Q.ghost_vertices():
            gates.append("half system Q is redundant (ghost vertex)")
    if maslov is None:
        maslov = minimal_maslov(QS, assume_simply_connected_fiber) if cert.monotone else None
    if maslov is None or maslov.value is None:
        gates.append("no minimal Maslov number")
    elif maslov.value <= 2:
        gates.append(f"N_L = {maslov.value} is not > 2")
    spin, _, spin_trail = spin_orientability(QS)
    base_trail = [f"gate passed: {g}" for g in ("monotone", "even wedge", "Q irredundant", "N_L > 2")]

    if gates:
        for vid, text in (
            ("i", "QH(L, G[T,T^-1]) = 0 for any ring G with 2 invertible"),
            ("ii", "QH(L, Z[T,T^-1]) is not isomorphic to H(L, Z[T,T^-1])"),
            ("iii", "QH(L, Z2[T,T^-1]) = 0"),
        ):
            verdicts.append(_verdict(vid, text, "inapplicable", list(gates)))
    else:
        for vid, text in (
            ("i", "QH(L, G[T,T^-1]) = 0 for any ring G with 2 invertible"),
            ("ii", "QH(L, Z[T,T^-1]) is not isomorphic to H(L, Z[T,T^-1])"),
        ):
            if spin == "yes":
                verdicts.append(_verdict(vid, text, "decided", base_trail + spin_trail))
            else:
                verdicts.append(_verdict(vid, text, "inapplicable", base_trail + spin_trail + ["L not known to be spin"]))
        mq = m_number(Q)
        bound = 2 * mq - 1
        try:
            ok = integral_vanishing_range_check(Q, bound)
            check = f"H^q(R̃_P, Z) = 0 for 0 < q < {bound}: {'verified' if ok else 'FAILED'}"
        except CapExceeded as exc:
            check = f"vanishing range not checked: {exc.message}"
        verdicts.append(
            _verdict(
                "iii",
                "QH(L, Z2[T,T^-1]) = 0",
                "hypothesis-dependent",
                base_trail
                + [f"m(Q) = {mq}", check, f"requires the Cartan-Leray differential on E^(0,{bound}) to vanish (not computed)"],
            )
        )
    fam = match_family(QS) if cert.monotone else None
    if fam is not None:
        family, _ = fam
        verdicts.append(
            _verdict("iv", family.verdict, "decided", ["monotone", f"registered family: {family.name} ({family.condition})"])
        )
    else:
        why = list(gates) + ["no registered family matches the nerve and multiplicities"]
        verdicts.append(_verdict("iv", "family closure from the registry", "inapplicable", why))
    return verdicts


# ---------------------------------------------------------------------------
# the full report


@dataclass
class LagrangianReport:
    ambient_dim: int
    torus_rank: int
    fiber_description: dict
    monotone: bool
    failing: list[str]
    maslov_number: Optional[int]
    maslov_status: str
    spin: str
    orientable: str
    fibration_trivial: str
    pi1_summary: str
    narrowness: list[dict]
    hypothesis_trail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "ambient_dim": self.ambient_dim,
            "ambient": f"CP^{self.ambient_dim}",
            "torus_rank": self.torus_rank,
            "fiber_description": self.fiber_description,
            "monotone": self.monotone,
            "failing_hypotheses": self.failing,
            "maslov_number": self.maslov_number,
            "maslov_status": self.maslov_status,
            "spin": self.spin,
            "orientable": self.orientable,
            "fibration_trivial": self.fibration_trivial,
            "pi1_summary": self.pi1_summary,
            "narrowness": self.narrowness,
            "hypothesis_trail": self.hypothesis_trail,
        }


def fiber_text(QS: QuadricSystem) -> str:
    if QS.rows == 1:
        return f"RP^{QS.n - 1}"
    return f"R̃_P/Z_2, cut out by {QS.rows} quadrics in RP^{QS.n - 1}"


def lagrangian_report(
    QS: QuadricSystem,
    assume_simply_connected_fiber: bool = False,
    cap: int = FIBER_BASIS_CAP,
) -> LagrangianReport:
    cert = monotone_certificate(QS)
    trail: dict = {"monotone": cert.trail}
    maslov = None
    if cert.monotone:
        maslov = minimal_maslov(QS, assume_simply_connected_fiber)
        trail["maslov_number"] = maslov.trail
    else:
        trail["maslov_number"] = ["not monotone"]
    spin, orientable, spin_trail = spin_orientability(QS)
    trail["spin"] = spin_trail
    trail["orientable"] = spin_trail
    fib, fib_trail = fibration_triviality(QS)
    trail["fibration_trivial"] = fib_trail
    pi1, pi1_trail = pi1_summary(QS)
    trail["pi1_summary"] = pi1_trail
    try:
        betti = fiber_betti(QS, cap)
    except MomentLagError as exc:
        betti = {"error": exc.message}
    fiber = {"text": fiber_text(QS), "betti": betti}
    trail["fiber_description"] = ["cubical Z2 complex when n <= 12; Koszul complex of the half system for even wedges"]
    verdicts = narrowness_report(QS, assume_simply_connected_fiber, maslov) if cert.monotone else [
        _verdict(v, "", "inapplicable", ["not monotone: " + ", ".join(cert.failing)]) for v in ("i", "ii", "iii", "iv")
    ]
    trail["narrowness"] = ["each verdict carries its own trail"]
    return LagrangianReport(
        ambient_dim=cert.ambient_dim,
        torus_rank=cert.torus_rank,
        fiber_description=fiber,
        monotone=cert.monotone,
        failing=cert.failing,
        maslov_number=maslov.value if maslov else None,
        maslov_status=maslov.status if maslov else UNVERIFIED,
        spin=spin,
        orientable=orientable,
        fibration_trivial=fib,
        pi1_summary=pi1,
        narrowness=verdicts,
        hypothesis_trail=trail,
    )


# ---------------------------------------------------------------------------
# oracle for cut simplices


def expected_betti_connected_sum(m: int, ell: int) -> list[int]:
    """Betti numbers of the connected sum of j*C(ell+1, j+1) copies of S^(j+2) x S^(2m+ell-j-1)."""
    if ell < 0 or m < 1:
        raise InvalidInput("need m >= 1 and ell >= 0")
    top = 2 * m + ell + 1
    betti = [0] * (top + 1)
    betti[0] = 1
    betti[top] = 1
    for j in range(1, ell + 1):
        copies = j * comb(ell + 1, j + 1)
        betti[j + 2] += copies
        betti[2 * m + ell - j - 1] += copies
    return betti
