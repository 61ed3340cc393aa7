"""Small 3-space helpers: dihedral angles and orientation-preserving fits."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


def wrap_2pi(x):
    """Representative of x modulo 2pi in [0, 2pi)."""
    return np.mod(x, TWO_PI)


def wrap_pi(x):
    """Representative of x modulo 2pi in [-pi, pi)."""
    return np.mod(np.asarray(x) + math.pi, TWO_PI) - math.pi


def vector_angle(u, v) -> float:
    """Angle between two vectors, stable near 0 and pi."""
    return math.atan2(np.linalg.norm(np.cross(u, v)), float(np.dot(u, v)))


def dihedral_angle(pi, pj, pk, pl) -> float:
    """Dihedral angle at edge i->j between oriented faces (i, j, k) and (j, i, l).

    Measured from face (i, j, k) to face (j, i, l) through the side that the
    orientation marks as interior, so an outward-oriented convex solid gets
    values in (0, pi). Result in [0, 2pi).
    """
    pi = np.asarray(pi, dtype=float)
    e = np.asarray(pj, dtype=float) - pi
    e = e / np.linalg.norm(e)
    w1 = np.asarray(pk, dtype=float) - pi
    w2 = np.asarray(pl, dtype=float) - pi
    w1 = w1 - np.dot(w1, e) * e
    w2 = w2 - np.dot(w2, e) * e
    ang = math.atan2(float(np.dot(e, np.cross(w2, w1))), float(np.dot(w1, w2)))
    return float(wrap_2pi(ang))


@dataclass(frozen=True)
class RigidMotion:
    """x -> scale * rotation @ x + translation, with det(rotation) = +1."""

    rotation: np.ndarray
    translation: np.ndarray
    scale: float = 1.0

    def apply(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        return self.scale * pts @ self.rotation.T + self.translation

    __call__ = apply


def fit_motion(source, target, with_scale: bool = False) -> RigidMotion:
    """Least-squares orientation-preserving motion (optionally similarity).

    Kabsch/Umeyama with the reflection correction, so the rotation always
    has determinant +1.
    """
    src = np.asarray(source, dtype=float)
    dst = np.asarray(target, dtype=float)
    mu_s, mu_d = src.mean(axis=0), dst.mean(axis=0)
    xs, xd = src - mu_s, dst - mu_d
    H = xs.T @ xd
    U, S, Vt = np.linalg.svd(H)
    d = np.sign(np.linalg.det(Vt.T @ U.T)) or 1.0
    D = np.diag([1.0, 1.0, d])
    R = Vt.T @ D @ U.T
    scale = 1.0
    if with_scale:
        var = float((xs * xs).sum())
        scale = float((S * np.diag(D)).sum() / var) if var > 0 else 1.0
    t = mu_d - scale * R @ mu_s
    return RigidMotion(R, t, scale)
