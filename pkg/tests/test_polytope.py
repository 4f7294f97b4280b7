import warnings
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from momentlag import corpus
from momentlag.errors import DepthTooLarge, Infeasible, OriginNotInterior, Unbounded
from momentlag.face_ring import SimplicialComplex, find_isomorphism, relabel
from momentlag.polytope import (
    Polytope,
    cut_vertex,
    dual_polytope,
    enumerate_vertices,
    irredundant_facets,
    irredundant_facets_by_lp,
    is_bounded,
    is_bounded_by_relation,
    is_delzant,
    is_fano,
    is_generic,
    minimal_transversals,
    nerve,
    normalize_b,
    polar_polytope,
)


def cube() -> Polytope:
    return Polytope.from_normals([(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, 0, 0), (0, -1, 0), (0, 0, -1)], [1] * 6)


F = Fraction


def test_square_vertices():
    V = enumerate_vertices(corpus.square())
    assert sorted(V.vertices) == sorted((F(x), F(y)) for x in (-1, 1) for y in (-1, 1))


def test_pentagon_vertices_and_active_sets():
    V = enumerate_vertices(corpus.pentagon())
    expected = {(-1, -1), (1, -1), (1, 0), (0, 1), (-1, 1)}
    assert {(int(x), int(y)) for x, y in V.vertices} == expected
    for mask in V.active_masks:
        assert bin(mask).count("1") == 2


def test_triangle_has_three_vertices():
    assert len(enumerate_vertices(corpus.simplex(2)).vertices) == 3


def test_unbounded_detection():
    half = Polytope(2, ((1, 0, 0), (0, 1, -1)), (1, 1, 1))
    assert not is_bounded(half)
    assert not is_bounded_by_relation(half)
    with pytest.raises(Unbounded):
        enumerate_vertices(half)


def test_half_plane_unbounded():
    # a cone with apex (-1, 0): x1 + 1 >= 0 together with two half-planes through the apex
    P = Polytope.from_normals([(1, 0), (1, 1), (1, -1)], [1, 1, 1])
    assert not is_bounded(P)
    assert not is_bounded_by_relation(P)


def test_empty_polytope_rejected():
    with pytest.raises(Infeasible):
        Polytope.from_normals([(1,), (-1,)], [-2, 1])


@pytest.mark.parametrize("name", ["square", "pentagon", "hexagon", "truncated_cube", "double_cut_cube", "simplex_m3"])
def test_boundedness_routes_agree(name):
    P = corpus.load(name)
    assert is_bounded(P) and is_bounded_by_relation(P)


def test_generic_fails_on_duplicated_facet():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        P = Polytope.from_normals([(1, 0), (0, 1), (-1, 0), (0, -1), (1, 0)], [1] * 5)
    assert not is_generic(P)
    assert is_generic(corpus.pentagon())
    assert is_generic(cube())


def test_duplicate_facet_warns():
    with pytest.warns(UserWarning):
        Polytope.from_normals([(1, 0), (0, 1), (-1, 0), (0, -1), (1, 0)], [1] * 5)


def test_irredundant_facets():
    assert irredundant_facets(corpus.pentagon()) == set(range(5))
    P = Polytope.from_normals([(1, 0), (0, 1), (-1, 0), (0, -1), (1, 0)], [1, 1, 1, 1, 10])
    assert irredundant_facets(P) == {0, 1, 2, 3}
    assert irredundant_facets(corpus.simplex(3)) == set(range(4))


def test_delzant_examples():
    assert is_delzant(corpus.simplex(2))
    assert is_delzant(corpus.truncated_cube())
    scaled = Polytope.from_normals([(2, 0), (0, 1), (-2, 0), (0, -1)], [1] * 4)
    assert not is_delzant(scaled)


def test_fano_examples():
    assert is_fano(corpus.pentagon())
    assert not is_fano(corpus.truncated_cube())
    assert is_fano(corpus.hexagon())


def test_dual_polytope_square_is_cross_polytope():
    pts = dual_polytope(corpus.square())
    assert sorted(pts) == sorted([(F(1), F(0)), (F(0), F(1)), (F(-1), F(0)), (F(0), F(-1))])


def test_dual_needs_interior_origin():
    P = Polytope.from_normals([(1, 0), (0, 1), (-1, 0), (0, -1)], [0, 1, 2, 1])
    with pytest.raises(OriginNotInterior):
        dual_polytope(P)


@pytest.mark.parametrize("name", ["square", "pentagon", "hexagon"])
def test_double_dual_nerve(name):
    P = corpus.load(name)
    back = polar_polytope(polar_polytope(P))
    assert back.n == P.n
    assert find_isomorphism(nerve(back), nerve(P)) is not None


def test_normalize_b():
    sq = corpus.square()
    assert normalize_b(sq).b == sq.b
    shifted = Polytope.from_normals([(1, 0), (0, 1), (-1, 0), (0, -1)], [F(3, 2), 1, F(1, 2), 1])
    N = normalize_b(shifted)
    assert all(x == 1 for x in N.b)
    assert nerve(N) == nerve(shifted)
    assert normalize_b(corpus.pentagon()).b == corpus.pentagon().b


def test_nerves():
    assert nerve(corpus.simplex(2)).min_nonfaces == ((0, 1, 2),)
    assert set(nerve(corpus.square()).min_nonfaces) == {(0, 2), (1, 3)}
    # the pentagon in fixture order has facet cycle 1,2,3,5,4
    K = nerve(corpus.pentagon())
    assert set(K.min_nonfaces) == {(0, 2), (0, 4), (1, 3), (1, 4), (2, 3)}


def test_minimal_transversals_simple():
    # edges {0,1} and {1,2}: minimal hitting sets {1} and {0,2}
    assert sorted(minimal_transversals([0b011, 0b110])) == sorted([0b010, 0b101])


def test_cut_vertex_simplex():
    S = corpus.simplex(2)
    Q = cut_vertex(S, (-1, -1), F(1, 2))
    assert Q.n == 4 and len(enumerate_vertices(Q).vertices) == 4
    for v in [(2, -1), (-1, 2)]:
        Q = cut_vertex(Q, v, F(1, 2))
    assert Q.n == 6 and is_generic(Q)
    assert find_isomorphism(nerve(Q), SimplicialComplex.polygon(6)) is not None


def test_cut_cube_gives_double_cut_fixture():
    C = cube()
    C = cut_vertex(C, (1, 1, 1), 1)
    C = cut_vertex(C, (-1, -1, -1), 1)
    assert nerve(C) == nerve(corpus.double_cut_cube())
    assert is_delzant(C)


def test_cut_too_deep():
    with pytest.raises(DepthTooLarge):
        cut_vertex(corpus.square(), (-1, -1), 2)


def test_json_round_trip():
    P = corpus.truncated_cube()
    assert Polytope.from_json(P.to_json()) == P


@pytest.mark.parametrize("name", ["square", "pentagon", "hexagon", "truncated_cube", "double_cut_cube", "simplex_m3"])
def test_irredundancy_routes_agree(name):
    P = corpus.load(name)
    by_lp = irredundant_facets_by_lp(P)
    enumerate_vertices(P)
    assert irredundant_facets(P) == by_lp == set(range(P.n))


def test_redundant_facet_found_by_both_routes():
    P = Polytope.from_normals([(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1)], [1, 1, 1, 1, 5])
    enumerate_vertices(P)
    assert irredundant_facets(P) == irredundant_facets_by_lp(P) == {0, 1, 2, 3}


@pytest.mark.parametrize("name", ["wide_narrow_k1", "three_spheres"])
def test_vertex_routes_agree_on_wedges(name):
    from momentlag.polytope import _vertices_by_slack_bases, _vertices_by_subsets
    from momentlag.quadrics import quadrics_to_polytope

    P = quadrics_to_polytope(corpus.load(name))
    a = _vertices_by_subsets(P, None)
    b = _vertices_by_slack_bases(P, None)
    assert sorted(a.active_masks) == sorted(b.active_masks)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["square", "pentagon", "hexagon", "double_cut_cube"]), st.randoms(use_true_random=False))
def test_nerve_invariant_under_facet_permutation(name, rnd):
    P = corpus.load(name)
    perm = list(range(P.n))
    rnd.shuffle(perm)
    # facet perm[i] of the new polytope is facet i of the old one
    inv = [perm.index(j) for j in range(P.n)]
    Q = Polytope.from_normals([P.normal(inv[j]) for j in range(P.n)], [P.b[inv[j]] for j in range(P.n)])
    assert nerve(Q) == relabel(nerve(P), perm)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.sampled_from([F(1, 2), F(1), F(3, 2), F(2)]), min_size=4, max_size=4))
def test_nerve_invariant_under_normalize_b(bs):
    P = Polytope.from_normals([(1, 0), (0, 1), (-1, 0), (0, -1)], bs)
    assert nerve(normalize_b(P)) == nerve(P)


@pytest.mark.parametrize("name", ["square", "pentagon", "hexagon", "truncated_cube", "double_cut_cube", "simplex_m3"])
def test_delzant_implies_generic_with_m_active(name):
    P = corpus.load(name)
    if is_delzant(P):
        assert is_generic(P)
    if is_generic(P):
        assert all(bin(mask).count("1") == P.m for mask in enumerate_vertices(P).active_masks)
