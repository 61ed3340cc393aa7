"""Euclidean triangle residuals: lengths a, b, c opposite angles alpha, beta, gamma."""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from . import tolerances
from .errors import DegenerateTriangle


class EuclideanTriangle(NamedTuple):
    a: float
    b: float
    c: float
    alpha: float
    beta: float
    gamma: float


def g_delta(a, b, c, alpha, beta, gamma):
    """Residual that vanishes exactly on nondegenerate triangles.

    Works elementwise on arrays; the leading axis of the result has size 3.
    """
    return np.array([
        a * np.cos(beta) + b * np.cos(alpha) - c,
        b * np.sin(alpha) - a * np.sin(beta),
        alpha + beta + gamma - np.pi,
    ])


def jac_g_delta(a, b, c, alpha, beta, gamma) -> np.ndarray:
    """3x6 Jacobian of :func:`g_delta`, columns ordered a, b, c, alpha, beta, gamma."""
    ca, sa = math.cos(alpha), math.sin(alpha)
    cb, sb = math.cos(beta), math.sin(beta)
    return np.array([
        [cb, ca, -1.0, -b * sa, -a * sb, 0.0],
        [-sb, sa, 0.0, b * ca, -a * cb, 0.0],
        [0.0, 0.0, 0.0, 1.0, 1.0, 1.0],
    ])


def _acos_checked(x: float, clamp: float, what: str) -> float:
    if x > 1.0 + clamp or x < -1.0 - clamp:
        raise DegenerateTriangle(f"{what}: arccos argument {x!r} out of range")
    return math.acos(min(1.0, max(-1.0, x)))


def solve_triangle_from_lengths(a: float, b: float, c: float, clamp: float | None = None):
    """Angles (alpha, beta, gamma) opposite the sides a, b, c.

    Raises DegenerateTriangle unless the strict triangle inequalities hold.
    """
    clamp = tolerances.ACOS_CLAMP if clamp is None else clamp
    if min(a, b, c) <= 0:
        raise DegenerateTriangle(f"non-positive side in {(a, b, c)}")
    if a >= b + c or b >= c + a or c >= a + b:
        raise DegenerateTriangle(f"sides {(a, b, c)} violate the strict triangle inequality")
    alpha = _acos_checked((b * b + c * c - a * a) / (2 * b * c), clamp, "alpha")
    beta = _acos_checked((c * c + a * a - b * b) / (2 * c * a), clamp, "beta")
    gamma = math.pi - alpha - beta
    if not (0.0 < gamma < math.pi):
        raise DegenerateTriangle(f"sides {(a, b, c)} give gamma={gamma}")
    return alpha, beta, gamma
