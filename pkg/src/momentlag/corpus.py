"""The worked examples as constructors, plus the JSON corpus built from them.

Each fixture is a polytope or a quadric system together with a few notes
on how the presentation was fixed.  ``write_corpus`` regenerates the JSON
files shipped in ``momentlag/fixtures``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Union

from .polytope import Polytope
from .quadrics import QuadricSystem, multiwedge, polytope_to_quadrics

Obj = Union[Polytope, QuadricSystem]


def simplex(m: int) -> Polytope:
    """Standard simplex: x_i + 1 >= 0 and 1 - sum x_i >= 0 (all b equal)."""
    normals = [[1 if r == i else 0 for r in range(m)] for i in range(m)]
    normals.append([-1] * m)
    return Polytope.from_normals(normals, [1] * (m + 1))


def square() -> Polytope:
    return Polytope.from_normals([(1, 0), (0, 1), (-1, 0), (0, -1)], [1, 1, 1, 1])


def pentagon() -> Polytope:
    return Polytope.from_normals([(1, 0), (0, 1), (-1, 0), (0, -1), (-1, -1)], [1] * 5)


def hexagon() -> Polytope:
    """Monotone hexagon; facet order matches the quadric system with delta = (2,2,1,3)."""
    return Polytope.from_normals([(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, -1)], [1] * 6)


def hexagon_wide_narrow() -> Polytope:
    """The same hexagon with the last two facets swapped: delta = (2,2,3,1)."""
    return Polytope.from_normals([(1, 0), (0, 1), (-1, 0), (0, -1), (-1, -1), (1, 1)], [1] * 6)


def prodsimplex(p: int, n: int) -> QuadricSystem:
    """Product of simplices of dimensions p - 1 and n - p - 1."""
    return QuadricSystem(((1, 0), (0, 1)), (p, n - p), (p, n - p))


def truncated_cube() -> Polytope:
    normals = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, 0, 0), (0, -1, 0), (0, 0, -1), (1, 1, 0), (-1, 0, -1), (0, -1, 1)]
    return Polytope.from_normals(normals, [2, 2, 2, 2, 2, 2, 3, 3, 3])


def double_cut_cube() -> Polytope:
    normals = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, 0, 0), (0, -1, 0), (0, 0, -1), (-1, -1, -1), (1, 1, 1)]
    return Polytope.from_normals(normals, [1, 1, 1, 1, 1, 1, 2, 2])


def wide_narrow(k: int) -> QuadricSystem:
    return multiwedge(polytope_to_quadrics(hexagon_wide_narrow()), [2 * k] * 6)


def double_cut_wedge(k: int) -> QuadricSystem:
    return multiwedge(polytope_to_quadrics(double_cut_cube()), [2 * k] * 6 + [4 * k] * 2)


def truncated_cube_wedge(k: int) -> QuadricSystem:
    return multiwedge(polytope_to_quadrics(truncated_cube()), [4 * k] * 6 + [6 * k] * 3)


def three_spheres(k: int = 2, p1: int = 4, p2: int = 8, n: int = 16) -> QuadricSystem:
    """Columns (1,1,-1), e1, e2, e3 with multiplicities (k, p1-k, p2-p1, n-p2)."""
    Gamma = ((1, 1, 0, 0), (1, 0, 1, 0), (-1, 0, 0, 1))
    J = (k, p1 - k, p2 - p1, n - p2)
    delta = (p1, p2 - p1 + k, n - p2 - k)
    return QuadricSystem(Gamma, delta, J)


def non_delzant() -> QuadricSystem:
    """Smooth quadrics whose lattice drops on the face u_1 = 0."""
    return QuadricSystem(((1, 1, 1, 1, 1), (1, 0, 0, 2, 2)), (5, 6))


@dataclass
class Fixture:
    name: str
    build: Callable[[], Obj]
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        obj = self.build()
        kind = "polytope" if isinstance(obj, Polytope) else "quadrics"
        return {"name": self.name, "kind": kind, "notes": self.notes, kind: obj.to_json()}


FIXTURES = [
    Fixture("simplex_m2", lambda: simplex(2), ["standard simplex, all b equal"]),
    Fixture("simplex_m3", lambda: simplex(3), ["standard simplex, all b equal"]),
    Fixture("square", square),
    Fixture("pentagon", pentagon, ["b = (1,1,1,1,1): five facets, Gamma b = (2,2,3)"]),
    Fixture("hexagon", hexagon, ["Gale rows (1,0,1,0,0,0),(0,1,0,1,0,0),(1,1,0,0,-1,0),(1,1,0,0,0,1), delta (2,2,1,3)"]),
    Fixture("wide_narrow_k1", lambda: wide_narrow(1), ["hexagon with last two facets swapped, J = (2k)^6"]),
    Fixture("wide_narrow_k2", lambda: wide_narrow(2), ["hexagon with last two facets swapped, J = (2k)^6"]),
    Fixture("wide_narrow_k3", lambda: wide_narrow(3), ["hexagon with last two facets swapped, J = (2k)^6"]),
    Fixture("prodsimplex_p3_n9", lambda: prodsimplex(3, 9)),
    Fixture("prodsimplex_p2_n5", lambda: prodsimplex(2, 5)),
    Fixture("prodsimplex_p3_n6", lambda: prodsimplex(3, 6), ["n = 2p with p odd: registered wide family"]),
    Fixture(
        "truncated_cube",
        truncated_cube,
        [
            "inequalities printed with right-hand side 2 are read as >= 0",
            "facet labels follow the inequality order; v4 v6, v1 v2, v5 v2 do not meet",
        ],
    ),
    Fixture("truncated_cube_wedge_k1", lambda: truncated_cube_wedge(1), ["J = (4k x 6, 6k x 3) at k = 1, n = 42"]),
    Fixture("double_cut_cube", double_cut_cube),
    Fixture("double_cut_wedge_k1", lambda: double_cut_wedge(1), ["J = (2k x 6, 4k x 2)"]),
    Fixture("double_cut_wedge_k2", lambda: double_cut_wedge(2), ["J = (2k x 6, 4k x 2)"]),
    Fixture("three_spheres", three_spheres, ["k=2, p1=4, p2=8, n=16"]),
    Fixture("non_delzant", non_delzant, ["smooth, but the lattice generated off u_1 = 0 is 2Z x Z"]),
]

BY_NAME = {f.name: f for f in FIXTURES}


def load(name: str) -> Obj:
    return BY_NAME[name].build()


def fixture_dir() -> Path:
    return Path(str(resources.files("momentlag") / "fixtures"))


def write_corpus(directory: Path | None = None) -> list[Path]:
    directory = directory or fixture_dir()
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for fx in FIXTURES:
        path = directory / f"{fx.name}.json"
        path.write_text(json.dumps(fx.to_json(), indent=2) + "\n")
        out.append(path)
    return out
