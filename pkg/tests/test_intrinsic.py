import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polymoduli import build, shapes
from polymoduli.build import PolyhedronEmbedding
from polymoduli.cones import central_jacobian
from polymoduli.complex import build_complex
from polymoduli.errors import MissingEntry
from polymoduli.intrinsic import check_in_membership, g_in, jac_g_in, propagate_lengths
from polymoduli.moduli import numeric_nullity

from oracles import corner_angle

PI = math.pi
TET = build_complex([(0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2)])


def random_tetrahedron(rng):
    while True:
        X = rng.normal(size=(4, 3))
        vol = np.dot(X[1] - X[0], np.cross(X[2] - X[0], X[3] - X[0]))
        if abs(vol) > 0.1:
            faces = [(0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2)]
            if vol > 0:  # face (0, 1, 2) must point away from vertex 3
                faces = [(i, k, j) for i, j, k in faces]
            return PolyhedronEmbedding(build_complex(faces), X)


def test_regular_tetrahedron_residual_is_zero():
    sigma = np.full(12, PI / 3)
    np.testing.assert_allclose(g_in(TET, np.ones(6), sigma), 0, atol=1e-15)
    np.testing.assert_allclose(g_in(TET, np.full(6, 2.0), sigma), 0, atol=1e-15)


def test_one_perturbed_corner_is_visible():
    sigma = np.full(12, PI / 3)
    sigma[4] += 1e-3
    r = g_in(TET, np.ones(6), sigma)
    # frozen: the angle-sum row moves by exactly the perturbation
    assert np.max(np.abs(r)) >= 1e-4
    assert np.max(np.abs(r)) == pytest.approx(1e-3, rel=1e-9)


def test_size_errors():
    with pytest.raises(MissingEntry):
        g_in(TET, np.ones(5), np.full(12, PI / 3))
    with pytest.raises(MissingEntry):
        propagate_lengths(TET, np.full(12, PI / 3), base_edge=(0, 0))


def test_corner_convention_matches_coordinates(rng):
    P = random_tetrahedron(rng)
    a = build.extract_angles(P)
    for c, corner in enumerate(P.K.corners):
        i, j = corner.wings
        X = P.coords
        assert a.sigma[c] == pytest.approx(corner_angle(X[corner.center], X[i], X[j]), abs=1e-12)
    assert np.max(np.abs(g_in(P.K, a.ell, a.sigma))) < 1e-12


@pytest.mark.parametrize("base", [1.0, 2.5])
def test_regular_propagation(base):
    ell = propagate_lengths(TET, np.full(12, PI / 3), base_length=base)
    np.testing.assert_allclose(ell, base, rtol=1e-15)


def test_propagation_recovers_true_lengths(rng):
    for _ in range(5):
        P = random_tetrahedron(rng)
        a = build.extract_angles(P)
        e = int(rng.integers(P.K.E))
        ell = propagate_lengths(P.K, a.sigma, base_edge=e, base_length=a.ell[e])
        np.testing.assert_allclose(ell, a.ell, rtol=1e-9)


def test_membership_examples():
    K = shapes.icosahedron().K
    ok = check_in_membership(K, np.full(60, PI / 3))
    assert ok.member
    np.testing.assert_allclose(ok.ell, 1.0)
    sigma = np.full(12, PI / 3)
    # keep every face sum, break the sine chain
    sigma[0] += 0.01
    sigma[1] -= 0.01
    assert not check_in_membership(TET, sigma, tol=1e-6).member
    sigma = np.full(12, PI / 3)
    sigma[3:6] += 0.1 / 3
    assert not check_in_membership(TET, sigma).member


@pytest.mark.parametrize("name", ["tetrahedron", "octahedron", "icosahedron"])
def test_scaling_and_path_independence(name, platonic, rng):
    P = shapes.jitter(platonic[name], 0.1, rng)
    a = build.extract_angles(P)
    assert check_in_membership(P.K, a.sigma).member
    base = propagate_lengths(P.K, a.sigma)
    for lam in (0.3, 7.0):
        np.testing.assert_allclose(propagate_lengths(P.K, a.sigma, base_length=lam), lam * base,
                                   rtol=1e-12)
    for e in rng.choice(P.K.E, 5, replace=False):
        other = propagate_lengths(P.K, a.sigma, base_edge=int(e))
        np.testing.assert_allclose(other / other[0], base, atol=1e-9)


@pytest.mark.parametrize("name", ["tetrahedron", "octahedron", "icosahedron", "torus"])
def test_intrinsic_nullity_is_edge_count(name, platonic):
    P = platonic.get(name) or shapes.csaszar_torus()
    a = build.extract_angles(P)
    assert numeric_nullity(jac_g_in(P.K, a.ell, a.sigma)).nullity == P.K.E


@given(st.integers(0, 2**32 - 1))
def test_jacobian_matches_finite_differences(seed):
    rng = np.random.default_rng(seed)
    ell = rng.uniform(0.5, 2, 6)
    sigma = rng.uniform(0.3, 2.5, 12)
    fd = central_jacobian(lambda x: g_in(TET, x[:6], x[6:]), np.concatenate([ell, sigma]))
    np.testing.assert_allclose(jac_g_in(TET, ell, sigma), fd, atol=1e-7)


@given(st.integers(0, 2**32 - 1))
def test_random_tetrahedra_are_members(seed):
    P = random_tetrahedron(np.random.default_rng(seed))
    a = build.extract_angles(P)
    got = check_in_membership(P.K, a.sigma)
    assert got.member
    np.testing.assert_allclose(got.ell / got.ell[0], a.ell / a.ell[0], rtol=1e-9)
