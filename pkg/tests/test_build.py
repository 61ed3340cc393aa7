import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polymoduli import shapes
from polymoduli.build import (
    PolyhedronEmbedding,
    extract_angles,
    flat_edges,
    format_obj,
    in_general_position,
    parse_obj,
    reconstruct,
    reconstruct_with_report,
    rigid_motion_from_point_triples,
    similarity_compare,
)
from polymoduli.complex import build_complex
from polymoduli.errors import (
    Collinear,
    CombinatoricMismatch,
    DegenerateFace,
    FormatError,
    GenusNotZero,
    NotAMember,
    NotCongruent,
    ZeroDihedral,
)

from oracles import normal_dihedral

PI = math.pi


def rotation_z(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])


def normal_dihedrals(P):
    K, X = P.K, P.coords
    out = []
    for e, (a, b) in enumerate(K.edges):
        f, g = K.edge_faces[e]
        x = next(v for v in K.faces[f] if v not in (a, b))
        y = next(v for v in K.faces[g] if v not in (a, b))
        out.append(normal_dihedral(X[a], X[b], X[x], X[y]))
    return np.array(out)


@pytest.mark.parametrize("name,dihedral", [
    ("tetrahedron", 1.2309594173407747),      # arccos(1/3)
    ("octahedron", 1.9106332362490186),       # arccos(-1/3)
    ("icosahedron", 2.4118649973628269),      # arccos(-sqrt(5)/3)
])
def test_regular_solids(name, dihedral, platonic):
    P = platonic[name]
    a = extract_angles(P)
    np.testing.assert_allclose(a.sigma, PI / 3, atol=1e-14)
    np.testing.assert_allclose(a.delta, dihedral, atol=1e-14)
    np.testing.assert_allclose(a.delta, normal_dihedrals(P), atol=1e-14)
    np.testing.assert_allclose(a.ell, a.ell[0], rtol=1e-15)


def test_frozen_dihedral_constants():
    assert math.acos(1 / 3) == pytest.approx(1.2309594173407747, abs=1e-16)
    assert math.acos(-1 / 3) == pytest.approx(1.9106332362490186, abs=1e-16)
    assert math.acos(-math.sqrt(5) / 3) == pytest.approx(2.4118649973628269, abs=1e-15)


def test_cube_with_diagonals():
    P = shapes.cube_with_diagonals()
    a = extract_angles(P)
    flat = flat_edges(a.delta)
    assert len(flat) == 6
    for e, (i, j) in enumerate(P.K.edges):
        length = np.linalg.norm(P.coords[i] - P.coords[j])
        expected = PI if math.isclose(length, math.sqrt(2)) else PI / 2
        assert a.delta[e] == pytest.approx(expected, abs=1e-14)
    assert not in_general_position(P)


def test_degenerate_embeddings():
    K = build_complex([(0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2)])
    with pytest.raises(DegenerateFace):
        PolyhedronEmbedding(K, np.array([(0, 0, 0), (1, 0, 0), (2, 0, 0), (0, 1, 0.0)]))
    with pytest.raises(DegenerateFace):
        PolyhedronEmbedding(K, np.zeros((3, 3)))


def test_folded_edge():
    # an octahedron with one vertex reflected onto its neighbour's face plane
    # produces a zero dihedral on the folded edges
    K = build_complex([(0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2)])
    X = np.array([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0.2, 0.2, 0.0)])
    with pytest.raises((ZeroDihedral, DegenerateFace)):
        extract_angles(PolyhedronEmbedding(K, X))


def test_triples():
    src = np.array([(0, 0, 0), (1, 0, 0), (0, 2, 0.0)])
    m = rigid_motion_from_point_triples(src, src)
    np.testing.assert_allclose(m.rotation, np.eye(3), atol=1e-15)
    R = rotation_z(PI / 2)
    m = rigid_motion_from_point_triples(src, src @ R.T)
    np.testing.assert_allclose(m.rotation, R, atol=1e-12)
    with pytest.raises(NotCongruent):
        rigid_motion_from_point_triples(src, src * 2)
    with pytest.raises(Collinear):
        rigid_motion_from_point_triples(np.array([(0, 0, 0), (1, 0, 0), (2, 0, 0.0)]), src)


def test_mirrored_triple_has_a_proper_motion():
    # three points carry no handedness in space: the mirror image of a
    # scalene triple is reached by a half-turn, so a det = +1 motion exists
    src = np.array([(0.1, 0.2, 0.3), (1.4, 0.1, -0.2), (0.3, 2.2, 0.5)])
    dst = src * np.array([-1, 1, 1])
    m = rigid_motion_from_point_triples(src, dst)
    assert np.linalg.det(m.rotation) == pytest.approx(1.0)
    np.testing.assert_allclose(m(src), dst, atol=1e-12)


def test_similarity_compare(platonic, rng):
    P = platonic["icosahedron"]
    Q = PolyhedronEmbedding(P.K, 3 * P.coords @ rotation_z(0.7).T + [1, 2, 3])
    got = similarity_compare(P, Q)
    assert got.ok and got.scale == pytest.approx(3.0)
    T = platonic["tetrahedron"]
    mirror = PolyhedronEmbedding(T.K, T.coords * np.array([1, 1, -1]))
    assert not similarity_compare(T, mirror).ok
    with pytest.raises(CombinatoricMismatch):
        similarity_compare(T, P)


@pytest.mark.parametrize("name", ["tetrahedron", "octahedron", "icosahedron"])
def test_reconstruct_regular(name, platonic):
    P = platonic[name]
    a = extract_angles(P)
    R = reconstruct_with_report(P.K, a.sigma, a.delta)
    Q = R.embedding
    assert similarity_compare(Q, P).ok
    got = extract_angles(Q)
    assert got.ell[0] == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(got.ell, 1.0, atol=1e-12)
    # gauge: first vertex at the origin, first cone edge along +z
    k = R.order[0]
    np.testing.assert_allclose(Q.coords[k], 0, atol=1e-15)
    first = Q.coords[P.K.links[k][0]]
    np.testing.assert_allclose(first / np.linalg.norm(first), [0, 0, 1], atol=1e-12)
    assert all(s.strip_deviation < 1e-9 and s.closure_deviation < 1e-9 for s in R.steps)


def test_reconstruct_rejects_non_members(platonic):
    P = platonic["octahedron"]
    a = extract_angles(P)
    delta = a.delta.copy()
    delta[3] = 2 * PI - delta[3]
    with pytest.raises(NotAMember):
        reconstruct(P.K, a.sigma, delta)
    T = shapes.csaszar_torus()
    t = extract_angles(T)
    with pytest.raises(GenusNotZero):
        reconstruct(T.K, t.sigma, t.delta)


def test_reconstruct_with_base_edge(platonic):
    P = platonic["octahedron"]
    a = extract_angles(P)
    e = P.K.edges[5]
    Q = reconstruct(P.K, a.sigma, a.delta, base_edge=e)
    assert np.linalg.norm(Q.coords[e[0]] - Q.coords[e[1]]) == pytest.approx(1.0)


def test_reconstruction_is_deterministic(platonic):
    P = platonic["icosahedron"]
    a = extract_angles(P)
    first = reconstruct(P.K, a.sigma, a.delta).coords
    assert np.array_equal(first, reconstruct(P.K, a.sigma, a.delta).coords)


@given(st.integers(0, 2**32 - 1))
def test_round_trips_on_perturbed_icosahedra(seed):
    P = shapes.perturbed_icosahedron(np.random.default_rng(seed))
    a = extract_angles(P)
    Q = reconstruct(P.K, a.sigma, a.delta)
    assert similarity_compare(Q, P).ok
    b = extract_angles(Q)
    np.testing.assert_allclose(b.sigma, a.sigma, atol=1e-7)
    np.testing.assert_allclose(np.angle(np.exp(1j * (b.delta - a.delta))), 0, atol=1e-7)


def test_nonconvex_round_trip(rng):
    # push one icosahedron vertex inwards past its neighbours: reflex edges
    P = shapes.icosahedron()
    X = P.coords.copy()
    X[0] *= 0.3
    Pin = PolyhedronEmbedding(P.K, X)
    a = extract_angles(Pin)
    assert np.any(a.delta > PI)
    assert in_general_position(Pin)
    assert similarity_compare(reconstruct(P.K, a.sigma, a.delta), Pin).ok


def test_obj_round_trip(platonic):
    P = platonic["icosahedron"]
    Q = parse_obj(format_obj(P))
    assert Q.K == P.K
    np.testing.assert_array_equal(Q.coords, P.coords)


def test_obj_errors():
    with pytest.raises(FormatError, match=":2:"):
        parse_obj("v 0 0 0\nf 1 2 3 4\n", path="m.obj")
    with pytest.raises(FormatError):
        parse_obj("v 0 0 x\n")
    with pytest.raises(FormatError):
        parse_obj("v 0 0 0\nf 1 2 3\n")
    text = "# comment\no thing\nvn 0 0 1\n" + format_obj(shapes.tetrahedron()).replace(
        "f 1 2 3", "f 1/1/1 2/2/2 3/3/3")
    assert parse_obj(text).K.F == 4
