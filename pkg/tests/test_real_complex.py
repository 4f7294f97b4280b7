import pytest

from momentlag.errors import CapExceeded, NotFree
from momentlag.face_ring import SimplicialComplex, wedge_complex
from momentlag.koszul import cohomology
from momentlag.real_complex import (
    boundary_squares_to_zero,
    cell_counts,
    euler_from_cells,
    integral_vanishing_range_check,
    z2_betti_real,
    z2_betti_real_quotient,
)


def genus(m):
    return 1 + (m - 4) * 2 ** (m - 3)


@pytest.mark.parametrize("m", [4, 5, 6, 7])
def test_polygon_surfaces(m):
    b = z2_betti_real(SimplicialComplex.polygon(m))
    assert b == [1, 2 * genus(m), 1]


def test_triangle_quotient_is_projective_plane():
    K = SimplicialComplex.polygon(3)
    assert z2_betti_real(K) == [1, 0, 1]
    assert z2_betti_real_quotient(K) == [1, 1, 1]


@pytest.mark.parametrize("m", [4, 5, 6])
def test_quotient_euler_halves(m):
    K = SimplicialComplex.polygon(m)
    chi = euler_from_cells(K)
    q = z2_betti_real_quotient(K)
    # a free involution halves the Euler characteristic; the quotient is a closed surface
    assert q[0] == 1 and q[-1] == 1 and len(q) == 3
    assert 2 - q[1] == chi // 2


def test_pentagon_quotient():
    assert z2_betti_real_quotient(SimplicialComplex.polygon(5)) == [1, 6, 1]


def test_cell_counts():
    # square: 2^4 corners, 4 vertices of K times 2^3 signs, 4 edges times 2^2 signs
    assert cell_counts(SimplicialComplex.polygon(4)) == [16, 32, 16]
    assert euler_from_cells(SimplicialComplex.polygon(5)) == 2 - 2 * genus(5)


@pytest.mark.parametrize("K", [
    SimplicialComplex.polygon(5),
    SimplicialComplex.boundary_of_simplex(3),
    wedge_complex(SimplicialComplex.polygon(4), [2, 1, 1, 1]),
])
def test_boundary_squares_to_zero(K):
    assert boundary_squares_to_zero(K)
    assert boundary_squares_to_zero(K, quotient=True)


def test_full_simplex_has_fixed_cell():
    with pytest.raises(NotFree):
        z2_betti_real_quotient(SimplicialComplex(3, ()))


def test_cap():
    with pytest.raises(CapExceeded):
        z2_betti_real(SimplicialComplex.polygon(8), cap=6)


def test_doubling_real_matches_complex():
    # the real complex of the doubled wedge and the complex moment-angle complex share Z2 Betti numbers
    K = SimplicialComplex.polygon(5)
    real = z2_betti_real(wedge_complex(K, [2] * 5))
    assert real == cohomology(K, "Z2").betti_vector()


def test_integral_vanishing_range():
    K = SimplicialComplex.polygon(6)
    assert integral_vanishing_range_check(K, 3)
    assert not integral_vanishing_range_check(K, 4)
    assert integral_vanishing_range_check(K, 1)


@pytest.mark.parametrize("K", [
    SimplicialComplex.polygon(4),
    SimplicialComplex.polygon(6),
    SimplicialComplex.boundary_of_simplex(3),
    wedge_complex(SimplicialComplex.polygon(5), [2, 1, 1, 1, 1]),
])
def test_euler_and_cell_counts(K):
    from momentlag.face_ring import popcount

    counts = cell_counts(K)
    assert sum(counts) == sum(2 ** (K.n - popcount(f)) for f in K.faces())
    b = z2_betti_real(K)
    chi = sum((-1) ** d * x for d, x in enumerate(b))
    assert chi == euler_from_cells(K)
    q = z2_betti_real_quotient(K)
    assert 2 * sum((-1) ** d * x for d, x in enumerate(q)) == chi
