"""Test and demo polyhedra with outward-oriented faces."""

from __future__ import annotations

import itertools
import math

import numpy as np

from .complex import build_complex

PHI = (1 + math.sqrt(5)) / 2


def _orient_outward(coords, faces):
    """Flip faces of a convex, origin-centred solid so normals point out."""
    out = []
    for f in faces:
        p = coords[list(f)]
        normal = np.cross(p[1] - p[0], p[2] - p[0])
        if np.dot(normal, p.mean(axis=0)) < 0:
            f = (f[0], f[2], f[1])
        out.append(_rotate_min_first(f))
    return sorted(out)


def _rotate_min_first(f):
    i = f.index(min(f))
    return tuple(f[i:] + f[:i])


def _clique_faces(coords):
    """Faces of a regular deltahedron: triangles of shortest edges."""
    n = len(coords)
    d = np.linalg.norm(coords[:, None] - coords[None], axis=2)
    shortest = d[d > 1e-9].min()
    adj = np.abs(d - shortest) < 1e-9 * shortest
    tris = [f for f in itertools.combinations(range(n), 3)
            if adj[f[0], f[1]] and adj[f[1], f[2]] and adj[f[0], f[2]]]
    return _orient_outward(coords, tris)


def _embedding(coords, faces):
    from .build import PolyhedronEmbedding

    return PolyhedronEmbedding(build_complex(faces), np.asarray(coords, dtype=float))


def tetrahedron():
    coords = np.array([(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)], float)
    return _embedding(coords, [(0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2)])


def octahedron():
    coords = np.array([(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0),
                       (0, 0, 1), (0, 0, -1)], float)
    return _embedding(coords, _clique_faces(coords))


def icosahedron():
    pts = []
    for s1 in (1, -1):
        for s2 in (1, -1):
            pts += [(0, s1, s2 * PHI), (s1, s2 * PHI, 0), (s2 * PHI, 0, s1)]
    coords = np.array(sorted(pts), float)
    return _embedding(coords, _clique_faces(coords))


def platonic():
    return {"tetrahedron": tetrahedron(), "octahedron": octahedron(),
            "icosahedron": icosahedron()}


def cube_with_diagonals():
    """Unit cube, each square split along a diagonal; diagonals are flat edges."""
    coords = np.array(list(itertools.product((0.0, 1.0), repeat=3)))
    squares = [(0, 1, 3, 2), (4, 5, 7, 6), (0, 1, 5, 4), (2, 3, 7, 6),
               (0, 2, 6, 4), (1, 3, 7, 5)]
    tris = []
    for a, b, c, d in squares:
        tris += [(a, b, c), (a, c, d)]
    centred = coords - 0.5
    return _embedding(coords, _orient_outward(centred, tris))


# Csaszar polyhedron: the embedded 7-vertex torus. Labels follow the
# triangulation {i, i+1, i+3}, {i, i+3, i+2} (mod 7).
_CSASZAR = np.array([(3, -3, 0), (-3, 3, 0), (-1, -2, 3), (3, 3, 1),
                     (0, 0, 15), (-3, -3, 1), (1, 2, 3)], float)


def csaszar_torus():
    faces = [(i, (i + 1) % 7, (i + 3) % 7) for i in range(7)]
    faces += [(i, (i + 3) % 7, (i + 2) % 7) for i in range(7)]
    coords = _CSASZAR
    vol = sum(np.dot(coords[i], np.cross(coords[j], coords[k])) for i, j, k in faces)
    if vol < 0:
        faces = [(i, k, j) for i, j, k in faces]
    return _embedding(coords, faces)


def jitter(P, scale: float, rng) -> "PolyhedronEmbedding":
    """Copy of P with every vertex moved uniformly inside a ball of radius ``scale``."""
    from .build import PolyhedronEmbedding

    n = P.coords.shape[0]
    direction = rng.normal(size=(n, 3))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    radius = scale * rng.random(n) ** (1 / 3)
    return PolyhedronEmbedding(P.K, P.coords + direction * radius[:, None])


def perturbed_icosahedron(rng, relative: float = 0.05):
    """Icosahedron with vertex jitter of ``relative`` times the edge length.

    Redraws until every vertex cone is in general position.
    """
    from .build import in_general_position

    base = icosahedron()
    edge = 2.0
    while True:
        P = jitter(base, relative * edge, rng)
        if in_general_position(P):
            return P


def random_cone_vectors(n: int, rng, spread: float = 0.6):
    """Edges of a random star-shaped cone around +z with jittered heights.

    Spread controls how far edges tilt; some draws produce reflex dihedrals.
    """
    theta = 2 * math.pi * np.arange(n) / n + rng.uniform(-0.4, 0.4, n) * (2 * math.pi / n)
    tilt = rng.uniform(0.3, 0.3 + spread * 2.0, n)
    u = np.stack([np.sin(tilt) * np.cos(theta), np.sin(tilt) * np.sin(theta), np.cos(tilt)], axis=1)
    if rng.random() < 0.5:
        u = u[::-1]
    return u
