"""Flat-cone surface constraints: face angles plus edge lengths.

``sigma`` is an array over corner ids and ``ell`` an array over edge ids of
the combinatoric (see :mod:`polymoduli.complex`).
"""

from __future__ import annotations

import math
from collections import deque
from typing import NamedTuple

import numpy as np

from . import tolerances
from .complex import Combinatoric
from .errors import MissingEntry
from .euclid import jac_g_delta


def _check_sizes(K: Combinatoric, ell=None, sigma=None):
    if sigma is not None and np.shape(sigma) != (3 * K.F,):
        raise MissingEntry(f"sigma needs {3 * K.F} corner values, got shape {np.shape(sigma)}")
    if ell is not None and np.shape(ell) != (K.E,):
        raise MissingEntry(f"ell needs {K.E} edge values, got shape {np.shape(ell)}")


def _face_arguments(K: Combinatoric):
    """Index arrays for the per-face g_delta arguments.

    For face (i, j, k): lengths ij, jk, ki and the corners at k, i, j, which
    are the angles opposite those edges.
    """
    faces = np.arange(K.F)
    edges = np.array([K.face_edges(f) for f in faces], dtype=int).reshape(-1, 3)
    corners = np.stack([3 * faces + 2, 3 * faces, 3 * faces + 1], axis=1)
    return edges, corners


def g_in(K: Combinatoric, ell, sigma) -> np.ndarray:
    """Stacked triangle residuals, three rows per face in face order."""
    ell = np.asarray(ell, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    _check_sizes(K, ell, sigma)
    edges, corners = _face_arguments(K)
    a, b, c = ell[edges[:, 0]], ell[edges[:, 1]], ell[edges[:, 2]]
    al, be, ga = sigma[corners[:, 0]], sigma[corners[:, 1]], sigma[corners[:, 2]]
    res = np.stack([
        a * np.cos(be) + b * np.cos(al) - c,
        b * np.sin(al) - a * np.sin(be),
        al + be + ga - np.pi,
    ], axis=1)
    return res.reshape(-1)


def jac_g_in(K: Combinatoric, ell, sigma) -> np.ndarray:
    """Analytic Jacobian of :func:`g_in`; columns are ell (E) then sigma (3F)."""
    ell = np.asarray(ell, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    _check_sizes(K, ell, sigma)
    edges, corners = _face_arguments(K)
    J = np.zeros((3 * K.F, K.E + 3 * K.F))
    for f in range(K.F):
        e, c = edges[f], corners[f]
        block = jac_g_delta(*ell[e], *sigma[c])
        rows = slice(3 * f, 3 * f + 3)
        for col in range(3):
            J[rows, e[col]] += block[:, col]
            J[rows, K.E + c[col]] += block[:, 3 + col]
    return J


def propagate_lengths(K: Combinatoric, sigma, base_edge=None, base_length: float = 1.0) -> np.ndarray:
    """Edge lengths from one edge by chaining the law of sines across faces.

    Faces are visited breadth-first from the two faces of ``base_edge``
    (an edge id or vertex pair; default: the lexicographically smallest
    edge). Each face fixes its unknown edges from the edge it was reached
    through.
    """
    sigma = np.asarray(sigma, dtype=float)
    _check_sizes(K, sigma=sigma)
    base = _edge_id(K, base_edge)
    ell = np.full(K.E, np.nan)
    ell[base] = float(base_length)
    queue = deque((f, base) for f in K.edge_faces[base])
    visited = set(K.edge_faces[base])
    sin = np.sin(sigma)
    while queue:
        f, via = queue.popleft()
        f_edges = K.face_edges(f)
        # corner opposite edge p of (ij, jk, ki) is at k, i, j -> offsets 2, 0, 1
        opposite = (3 * f + 2, 3 * f, 3 * f + 1)
        p = f_edges.index(via)
        ratio = ell[via] / sin[opposite[p]]
        for q, e in enumerate(f_edges):
            if np.isnan(ell[e]):
                ell[e] = ratio * sin[opposite[q]]
        for e, g in zip(f_edges, K.face_neighbors[f]):
            if g not in visited:
                visited.add(g)
                queue.append((g, e))
    return ell


def _edge_id(K: Combinatoric, edge) -> int:
    if edge is None:
        return 0
    if isinstance(edge, (int, np.integer)):
        if not 0 <= edge < K.E:
            raise MissingEntry(f"edge id {edge} out of range")
        return int(edge)
    a, b = edge
    try:
        return K.edge_id(a, b)
    except KeyError:
        raise MissingEntry(f"{tuple(edge)} is not an edge of the complex") from None


class InMembership(NamedTuple):
    member: bool
    ell: np.ndarray | None
    residual: float


def check_in_membership(K: Combinatoric, sigma, tol: float | None = None,
                        base_edge=None, base_length: float = 1.0) -> InMembership:
    """Whether ``sigma`` are the angles of a flat-cone surface triangulated by K.

    The max-norm residual of :func:`g_in` at the propagated lengths must be
    at most ``tol * (1 + base_length)``.
    """
    tol = tolerances.RESIDUAL if tol is None else tol
    sigma = np.asarray(sigma, dtype=float)
    if np.any(sigma <= 0) or np.any(sigma >= math.pi):
        return InMembership(False, None, math.inf)
    ell = propagate_lengths(K, sigma, base_edge, base_length)
    if not np.all(np.isfinite(ell)) or np.any(ell <= 0):
        return InMembership(False, None, math.inf)
    res = float(np.max(np.abs(g_in(K, ell, sigma))))
    ok = res <= tol * (1.0 + base_length)
    return InMembership(ok, ell if ok else None, res)
