import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polymoduli.cones import central_jacobian
from polymoduli.errors import DegenerateSphericalTriangle
from polymoduli.sphere import (
    Branch,
    angle_from_three_sides,
    g_three,
    jac_g_three,
    side_from_two_sides_and_angle,
)

from oracles import spherical_angle

PI = math.pi
H = PI / 2
# equilateral spherical triangle with sides pi/3, from the spherical cosine rule
EQUI = spherical_angle(PI / 3, PI / 3, PI / 3)


def test_equilateral_oracle_value():
    assert EQUI == pytest.approx(math.acos(1 / 3), abs=1e-15)


def test_octant_and_equilateral_residuals():
    np.testing.assert_allclose(g_three(H, H, H, H, H, H), 0, atol=1e-15)
    np.testing.assert_allclose(g_three(PI / 3, PI / 3, PI / 3, EQUI, EQUI, EQUI), 0, atol=1e-15)


def test_third_row_reads_the_angle():
    r = g_three(H, H, H, H, H, PI / 3)
    assert r[2] == pytest.approx(0.5)
    assert abs(r[0]) < 1e-15 and abs(r[1]) < 1e-15


def test_jacobian_known_entries():
    J = jac_g_three(H, H, H, H, H, H)
    assert J[0, 3] == pytest.approx(-1.0)
    assert J[0, 4] == 0.0


@given(*[st.floats(0.2, 2.9)] * 6)
def test_jacobian_matches_finite_differences(a, b, c, al, be, ga):
    x = np.array([a, b, c, al, be, ga])
    fd = central_jacobian(lambda v: g_three(*v), x)
    np.testing.assert_allclose(jac_g_three(*x), fd, atol=1e-7)


def test_side_from_two_sides_and_angle():
    assert side_from_two_sides_and_angle(H, H, H) == pytest.approx(H)
    assert side_from_two_sides_and_angle(PI / 3, PI / 3, EQUI) == pytest.approx(PI / 3)
    with pytest.raises(DegenerateSphericalTriangle):
        side_from_two_sides_and_angle(H, H, 0.0)


def test_angle_from_three_sides_branches():
    assert angle_from_three_sides(H, H, H, Branch.LOWER) == pytest.approx(H)
    assert angle_from_three_sides(PI / 3, PI / 3, PI / 3, Branch.LOWER) == pytest.approx(EQUI)
    assert angle_from_three_sides(PI / 3, PI / 3, PI / 3, Branch.UPPER) == pytest.approx(2 * PI - EQUI)


def test_angle_from_impossible_sides():
    with pytest.raises(DegenerateSphericalTriangle):
        angle_from_three_sides(2.5, 0.5, 0.5)
    with pytest.raises(DegenerateSphericalTriangle):
        angle_from_three_sides(0.0, 1.0, 1.0)


def test_branch_of_angle():
    assert Branch.of_angle(1.0) is Branch.LOWER
    assert Branch.of_angle(4.0) is Branch.UPPER
    for bad in (0.0, PI, 2 * PI, -1.0):
        with pytest.raises(DegenerateSphericalTriangle):
            Branch.of_angle(bad)


sides = st.floats(0.1, PI - 0.1)


@given(sides, sides, st.floats(0.05, PI - 0.05))
def test_side_then_angle_round_trip(b, c, alpha):
    try:
        a = side_from_two_sides_and_angle(b, c, alpha)
    except DegenerateSphericalTriangle:
        return
    # conditioning of arccos near 0 and pi limits the attainable accuracy
    if min(a, PI - a) < 1e-3:
        return
    assert angle_from_three_sides(a, b, c) == pytest.approx(alpha, abs=1e-10)


@given(sides, sides, st.floats(0.2, PI - 0.2))
def test_completed_triangle_vanishes_and_is_cyclic(b, c, alpha):
    try:
        a = side_from_two_sides_and_angle(b, c, alpha)
        al = angle_from_three_sides(a, b, c)
        be = angle_from_three_sides(b, c, a)
        ga = angle_from_three_sides(c, a, b)
    except DegenerateSphericalTriangle:
        return
    assert np.max(np.abs(g_three(a, b, c, al, be, ga))) < 1e-12
    np.testing.assert_allclose(g_three(b, c, a, be, ga, al),
                               np.roll(g_three(a, b, c, al, be, ga), -1), atol=1e-15)
    s = np.linalg.svd(jac_g_three(a, b, c, al, be, ga), compute_uv=False)
    assert s[2] > 1e-8
    # the side columns alone have rank three
    assert np.linalg.matrix_rank(jac_g_three(a, b, c, al, be, ga)[:, :3], tol=1e-8) == 3


@given(sides, sides, st.floats(0.2, PI - 0.2))
def test_upper_branch_residual_matches_lower(b, c, alpha):
    # cos is even about pi, so the reflected angles solve the same rows
    try:
        a = side_from_two_sides_and_angle(b, c, alpha)
        low = [angle_from_three_sides(*s) for s in ((a, b, c), (b, c, a), (c, a, b))]
    except DegenerateSphericalTriangle:
        return
    up = [angle_from_three_sides(*s, Branch.UPPER) for s in ((a, b, c), (b, c, a), (c, a, b))]
    np.testing.assert_allclose(up, [2 * PI - x for x in low])
    np.testing.assert_allclose(g_three(a, b, c, *up), g_three(a, b, c, *low), atol=1e-14)
