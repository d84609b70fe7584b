from __future__ import annotations

import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import invariant_factors

from almostnormal import (
    ParseError,
    Triangulation,
    TriangulationError,
    build_skeleton,
    first_homology,
    is_orientable,
    make_layered_lens_space,
    parse_triangulation,
    vertex_link,
)
from almostnormal.bundled import fixture_text, load_fixture
from almostnormal.homology import abelian_group_from_presentation, smith_diagonal
from almostnormal.triangulation import perm_inverse, perm_sign

from helpers import CLOSED, FIXTURES, LENS, cellular_h1

S3 = load_fixture("s3_1tet")
BALL = load_fixture("ball_1tet")
L41 = load_fixture("lens_4_1")


# --- parsing --------------------------------------------------------------

def test_parse_s3_fixture():
    assert S3.tet_count == 1
    assert S3.is_closed
    # face 1 <-> face 2 folded over edge 03, face 0 <-> face 3 twisted
    assert S3.gluings[0][2] == (0, (0, 2, 1, 3))
    assert S3.gluings[0][3] == (0, (1, 2, 3, 0))


def test_parse_unglued_tetrahedron():
    tri = parse_triangulation("tets 1\ntet 0: bdry bdry bdry bdry\n")
    assert tri.tet_count == 1
    assert all(g is None for g in tri.gluings[0])


def test_non_involutive_gluing_rejected():
    text = "tets 1\ntet 0: 0:1023 0:0213 0:1203 bdry\n"
    with pytest.raises(TriangulationError, match="involutive"):
        parse_triangulation(text)


def test_face_glued_to_itself_rejected():
    with pytest.raises(TriangulationError, match="itself"):
        Triangulation(1, (((0, (0, 1, 2, 3)), None, None, None),))


@pytest.mark.parametrize(
    "text, line",
    [
        ("tet 0: bdry bdry bdry bdry\n", 1),
        ("tets 1\ntet 0: bdry bdry bdry\n", 2),
        ("# c\ntets 1\ntet 0: bdry bdry bdry 0:0124\n", 3),
        ("tets 1\ntet 0: bdry bdry bdry 3:0123\n", 2),
        ("tets 2\ntet 0: bdry bdry bdry bdry\n\ntet 5: bdry bdry bdry bdry\n", 4),
        ("tets 1\ntet 0: bdry bdry bdry x\n", 2),
    ],
)
def test_parse_errors_report_lines(text, line):
    with pytest.raises(ParseError) as info:
        parse_triangulation(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_parse_missing_tetrahedron():
    with pytest.raises(ParseError, match="tetrahedron 1"):
        parse_triangulation("tets 2\ntet 0: bdry bdry bdry bdry\n")


def test_round_trip_text():
    for name, tri in FIXTURES.items():
        again = parse_triangulation(tri.to_text())
        assert again.gluings == tri.gluings


# --- skeleton -------------------------------------------------------------

def test_s3_skeleton():
    sk = S3.skeleton
    assert (sk.v, len(sk.edge_classes), len(sk.face_classes)) == (1, 2, 2)
    # edge 03 (index 2) alone; the other five edges form one class
    assert sk.edge_classes == (((0, 0), (0, 1), (0, 3), (0, 4), (0, 5)), ((0, 2),))


def test_unglued_skeleton():
    sk = BALL.skeleton
    assert (sk.v, len(sk.edge_classes), len(sk.face_classes)) == (4, 6, 4)
    assert all(sk.face_boundary) and all(sk.edge_boundary) and all(sk.vertex_boundary)


def test_lens_41_skeleton():
    sk = L41.skeleton
    assert L41.is_closed
    assert len(sk.edge_classes) == L41.tet_count + sk.v


def test_reversed_edge_rejected():
    tri = Triangulation(1, (((0, (1, 0, 3, 2)), (0, (1, 0, 3, 2)), None, None),))
    with pytest.raises(TriangulationError, match="reverse"):
        build_skeleton(tri)


def test_non_compact_vertex_rejected():
    tri = Triangulation(1, (((0, (1, 2, 0, 3)), (0, (2, 0, 1, 3)), None, None),))
    with pytest.raises(TriangulationError, match="link"):
        build_skeleton(tri)


def test_ideal_vertex_rejected():
    # the one-tetrahedron Gieseking-like gluing with a torus-or-worse link
    bad = None
    import itertools

    for p in itertools.permutations(range(4)):
        for q in itertools.permutations(range(4)):
            if p[0] != 1 or q[2] != 3:
                continue
            tri = Triangulation(
                1, (((0, p), (0, perm_inverse(p)), (0, q), (0, perm_inverse(q))),)
            )
            try:
                build_skeleton(tri)
            except TriangulationError as exc:
                if "link" in str(exc):
                    bad = exc
                    break
        if bad:
            break
    assert bad is not None


@pytest.mark.parametrize("name", sorted(CLOSED))
def test_edge_count_identity(name):
    tri = CLOSED[name]
    sk = tri.skeleton
    assert len(sk.edge_classes) == tri.tet_count + sk.v


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_face_class_sizes(name):
    sk = FIXTURES[name].skeleton
    for members, bdry in zip(sk.face_classes, sk.face_boundary):
        assert len(members) == (1 if bdry else 2)


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_skeleton_deterministic(name):
    a = parse_triangulation(fixture_text(name)).skeleton
    b = parse_triangulation(fixture_text(name)).skeleton
    assert a == b
    assert a.edge_slot == b.edge_slot


# --- vertex links ---------------------------------------------------------

def test_s3_vertex_link():
    link = vertex_link(S3, 0)
    assert len(link.triangles) == 4
    assert link.euler_characteristic == 2
    assert not link.has_boundary


def test_unglued_vertex_link():
    for v in range(4):
        link = vertex_link(BALL, v)
        assert len(link.triangles) == 1
        assert link.euler_characteristic == 1
        assert link.has_boundary


def test_lens_vertex_link_is_sphere():
    link = vertex_link(L41, 0)
    assert link.euler_characteristic == 2 and not link.has_boundary


def test_vertex_link_index_error():
    with pytest.raises(IndexError):
        vertex_link(S3, 1)


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_link_triangle_count(name):
    tri = FIXTURES[name]
    for k, members in enumerate(tri.skeleton.vertex_classes):
        link = vertex_link(tri, k)
        assert len(link.triangles) == len(members)
        assert link.euler_characteristic in (1, 2)
        # every triangle has one side per face of its tetrahedron
        assert len(link.adjacency) == 3 * len(members)


# --- orientability --------------------------------------------------------

def test_orientability_examples():
    assert is_orientable(S3)
    assert is_orientable(BALL)
    assert not is_orientable(load_fixture("nonorientable_2tet"))


def test_nonorientable_fixture_parity_argument():
    tri = load_fixture("nonorientable_2tet")
    # tet 0 face 0 -> tet 1 by an even perm, tet 0 face 2 -> tet 1 by an odd one
    assert perm_sign(tri.gluings[0][0][1]) == 1
    assert perm_sign(tri.gluings[0][2][1]) == -1
    assert tri.gluings[0][0][0] == tri.gluings[0][2][0] == 1


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_orientability_of_fixtures(name):
    assert is_orientable(FIXTURES[name]) == (name != "nonorientable_2tet")


# --- homology -------------------------------------------------------------

def test_s3_homology_trivial():
    assert first_homology(S3).is_trivial


def test_lens_homology():
    assert str(first_homology(L41)) == "Z/4"


def test_homology_needs_closed():
    with pytest.raises(TriangulationError):
        first_homology(BALL)


@pytest.mark.parametrize("name", sorted(CLOSED))
def test_homology_matches_cellular_chain_complex(name):
    tri = CLOSED[name]
    g = first_homology(tri)
    assert (g.rank, g.torsion) == cellular_h1(tri)


def test_lens_41_presentation_by_hand():
    # one tetrahedron: two faces (no dual tree edges since n = 1), two edges
    from almostnormal.homology import homology_presentation

    rows, gens = homology_presentation(L41)
    assert gens == 2 and len(rows) == 2
    assert abs(sympy.Matrix(rows).det()) == 4


@given(
    st.integers(1, 5).flatmap(
        lambda r: st.integers(1, 5).flatmap(
            lambda c: st.lists(
                st.lists(st.integers(-20, 20), min_size=c, max_size=c), min_size=r, max_size=r
            )
        )
    )
)
@settings(max_examples=200, deadline=None)
def test_smith_form_matches_sympy(m):
    mine = smith_diagonal(m)
    ref = [abs(int(x)) for x in invariant_factors(sympy.Matrix(m), domain=sympy.ZZ) if x != 0]
    assert mine == ref


def test_big_integers_in_smith_form():
    big = 10**40 + 7
    assert smith_diagonal([[big, 0], [0, big * 3]]) == [big, 3 * big]
    g = abelian_group_from_presentation([[2, 0, 0], [0, 3, 0]], 3)
    assert g.rank == 1 and g.torsion == (6,)


# --- lens spaces ----------------------------------------------------------

@pytest.mark.parametrize("p, q, order", [(1, 0, 1), (4, 1, 4), (7, 2, 7)])
def test_generator_examples(p, q, order):
    tri = make_layered_lens_space(p, q)
    assert tri.is_closed and is_orientable(tri)
    h = first_homology(tri)
    assert h.rank == 0 and h.order == order


def test_generator_sizes():
    assert make_layered_lens_space(7, 2).tet_count > make_layered_lens_space(4, 1).tet_count


def test_l10_is_the_s3_fixture():
    assert make_layered_lens_space(1, 0).gluings == S3.gluings


@pytest.mark.parametrize("p, q", [(0, 0), (4, 2), (4, 4), (5, -1), (1, 1), (6, 3)])
def test_generator_rejects_bad_parameters(p, q):
    with pytest.raises(ValueError):
        make_layered_lens_space(p, q)


@pytest.mark.parametrize("pq", sorted(LENS))
def test_bundled_lens_fixtures(pq):
    tri = load_fixture(LENS[pq])
    assert tri.gluings == make_layered_lens_space(*pq).gluings
    g = first_homology(tri)
    assert g.rank == 0 and g.torsion == (pq[0],)


@given(st.integers(2, 25).flatmap(lambda p: st.tuples(st.just(p), st.integers(1, p - 1))))
@settings(max_examples=25, deadline=None)
def test_generator_homology_property(pq):
    from math import gcd

    p, q = pq
    if gcd(p, q) != 1:
        return
    tri = make_layered_lens_space(p, q)
    assert is_orientable(tri)
    sk = tri.skeleton
    assert sk.v == 1 and len(sk.edge_classes) == tri.tet_count + 1
    assert cellular_h1(tri) == (0, (p,))


def test_random_relabelling_preserves_invariants():
    rng = random.Random(7)
    tri = load_fixture("lens_7_2")
    for _ in range(10):
        sigma = [rng.sample(range(4), 4) for _ in range(tri.tet_count)]
        rows = []
        for i in range(tri.tet_count):
            row = [None] * 4
            for f in range(4):
                j, p = tri.gluings[i][f]
                # new corner sigma[i][c] of tet i goes to sigma[j][p[c]]
                newp = [0] * 4
                for c in range(4):
                    newp[sigma[i][c]] = sigma[j][p[c]]
                row[sigma[i][f]] = (j, tuple(newp))
            rows.append(tuple(row))
        other = Triangulation(tri.tet_count, tuple(rows))
        assert is_orientable(other)
        assert len(other.skeleton.edge_classes) == len(tri.skeleton.edge_classes)
        assert first_homology(other) == first_homology(tri)
