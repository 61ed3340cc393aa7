"""Spherical triangle residuals on the unit sphere.

Sides a, b, c lie in (0, pi). The angles opposite them lie jointly in
(0, pi) (lower branch) or jointly in (pi, 2pi) (upper branch); the branch is
always passed explicitly.
"""

from __future__ import annotations

import enum
import math
from typing import NamedTuple

import numpy as np

from . import tolerances
from .errors import DegenerateSphericalTriangle


class Branch(enum.Enum):
    LOWER = "lower"
    UPPER = "upper"

    @classmethod
    def of_angle(cls, angle: float) -> "Branch":
        """Branch containing ``angle``; raises on 0, pi and values outside (0, 2pi)."""
        if 0.0 < angle < math.pi:
            return cls.LOWER
        if math.pi < angle < 2 * math.pi:
            return cls.UPPER
        raise DegenerateSphericalTriangle(f"angle {angle!r} lies in neither branch")


class SphericalTriangle(NamedTuple):
    a: float
    b: float
    c: float
    alpha: float
    beta: float
    gamma: float
    branch: Branch = Branch.LOWER


def g_three(a, b, c, alpha, beta, gamma):
    """Cyclic spherical cosine-rule residuals; elementwise on arrays."""
    ca, cb, cc = np.cos(a), np.cos(b), np.cos(c)
    sa, sb, sc = np.sin(a), np.sin(b), np.sin(c)
    return np.array([
        cb * cc + sb * sc * np.cos(alpha) - ca,
        cc * ca + sc * sa * np.cos(beta) - cb,
        ca * cb + sa * sb * np.cos(gamma) - cc,
    ])


def jac_g_three(a, b, c, alpha, beta, gamma) -> np.ndarray:
    """3x6 Jacobian of :func:`g_three`, columns a, b, c, alpha, beta, gamma."""
    ca, cb, cc = math.cos(a), math.cos(b), math.cos(c)
    sa, sb, sc = math.sin(a), math.sin(b), math.sin(c)
    cal, cbe, cga = math.cos(alpha), math.cos(beta), math.cos(gamma)
    return np.array([
        [sa, -sb * cc + cb * sc * cal, -cb * sc + sb * cc * cal,
         -sb * sc * math.sin(alpha), 0.0, 0.0],
        [-cc * sa + sc * ca * cbe, sb, -sc * ca + cc * sa * cbe,
         0.0, -sc * sa * math.sin(beta), 0.0],
        [-sa * cb + ca * sb * cga, -ca * sb + sa * cb * cga, sc,
         0.0, 0.0, -sa * sb * math.sin(gamma)],
    ])


def _acos(x: float, clamp: float) -> float:
    if x > 1.0 + clamp or x < -1.0 - clamp:
        raise DegenerateSphericalTriangle(f"arccos argument {x!r} out of range")
    return math.acos(min(1.0, max(-1.0, x)))


def side_from_two_sides_and_angle(b: float, c: float, alpha: float, clamp: float | None = None) -> float:
    """Side a opposite the angle alpha enclosed by sides b and c."""
    clamp = tolerances.ACOS_CLAMP if clamp is None else clamp
    x = math.cos(b) * math.cos(c) + math.sin(b) * math.sin(c) * math.cos(alpha)
    if x >= 1.0 - clamp or x <= -1.0 + clamp:
        raise DegenerateSphericalTriangle(
            f"side from ({b}, {c}, {alpha}) collapses to 0 or pi (cos = {x!r})"
        )
    return math.acos(x)


def angle_from_three_sides(a: float, b: float, c: float, branch: Branch = Branch.LOWER,
                           clamp: float | None = None) -> float:
    """Angle opposite side a, on the requested branch."""
    clamp = tolerances.ACOS_CLAMP if clamp is None else clamp
    for s in (a, b, c):
        if not (0.0 < s < math.pi):
            raise DegenerateSphericalTriangle(f"side {s!r} outside (0, pi)")
    denom = math.sin(b) * math.sin(c)
    x = (math.cos(a) - math.cos(b) * math.cos(c)) / denom
    angle = _acos(x, clamp)
    if angle <= 0.0 or angle >= math.pi:
        raise DegenerateSphericalTriangle(f"sides {(a, b, c)} span no spherical triangle")
    return angle if branch is Branch.LOWER else 2 * math.pi - angle
