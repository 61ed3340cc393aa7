"""Polyhedra from coordinates and back: angle extraction and reconstruction.

Reconstruction follows the disc-growth schedule: the first vertex cone is
placed in a fixed frame, and each later cone is rotated onto the strip of
faces it shares with the surface built so far.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import tolerances
from .complex import Combinatoric, build_complex, disc_growth_order, genus
from .cones import check_general_position, cone_angles_at, cone_index, realize_cone
from .errors import (
    ClosureFailure,
    Collinear,
    CombinatoricMismatch,
    DegenerateFace,
    FormatError,
    GenusNotZero,
    NotAMember,
    NotCongruent,
    NotInGeneralPosition,
    ZeroDihedral,
)
from .euclid import solve_triangle_from_lengths
from .geometry import RigidMotion, dihedral_angle, fit_motion, wrap_pi


@dataclass(frozen=True, eq=False)
class PolyhedronEmbedding:
    """Vertex coordinates for a combinatoric, one row per vertex.

    Faces must be nondegenerate; distinct faces may intersect.
    """

    K: Combinatoric
    coords: np.ndarray

    def __post_init__(self):
        P = np.array(self.coords, dtype=float)
        if P.shape != (self.K.V, 3):
            raise DegenerateFace(f"expected {self.K.V} x 3 coordinates, got {P.shape}")
        if not np.all(np.isfinite(P)):
            raise DegenerateFace("coordinates must be finite")
        P.setflags(write=False)
        object.__setattr__(self, "coords", P)
        floor = tolerances.FACE_AREA_REL * self.diameter ** 2
        for f, (i, j, k) in enumerate(self.K.faces):
            area = 0.5 * np.linalg.norm(np.cross(P[j] - P[i], P[k] - P[i]))
            if not area > floor:
                raise DegenerateFace(f"face {f} {self.K.faces[f]} has area {area:.3e}")

    @property
    def diameter(self) -> float:
        P = self.coords
        return float(np.max(np.linalg.norm(P[:, None] - P[None], axis=2)))

    def signed_volume(self) -> float:
        P = self.coords
        return sum(float(np.dot(P[i], np.cross(P[j], P[k]))) for i, j, k in self.K.faces) / 6.0


class ExtractedAngles(NamedTuple):
    sigma: np.ndarray
    delta: np.ndarray
    ell: np.ndarray


def edge_lengths(P: PolyhedronEmbedding) -> np.ndarray:
    E = np.array(P.K.edges)
    return np.linalg.norm(P.coords[E[:, 1]] - P.coords[E[:, 0]], axis=1)


def extract_angles(P: PolyhedronEmbedding) -> ExtractedAngles:
    """Face angles (per corner id), dihedral angles and lengths (per edge id).

    The dihedral angle at edge {i, j} is measured between the faces
    (i, j, k) and (j, i, l) so that convex, outward-oriented solids get
    values below pi.
    """
    K, X = P.K, P.coords
    ell = edge_lengths(P)
    sigma = np.empty(3 * K.F)
    for f in range(K.F):
        e_ij, e_jk, e_ki = K.face_edges(f)
        try:
            # angles at i, j, k sit opposite jk, ki, ij
            sigma[3 * f:3 * f + 3] = solve_triangle_from_lengths(ell[e_jk], ell[e_ki], ell[e_ij])
        except ValueError as exc:
            raise DegenerateFace(f"face {f} {K.faces[f]}: {exc}") from exc
    delta = np.empty(K.E)
    for e, (a, b) in enumerate(K.edges):
        f_ab, f_ba = K.edge_faces[e]
        x = _third_vertex(K.faces[f_ab], a, b)
        y = _third_vertex(K.faces[f_ba], a, b)
        d = dihedral_angle(X[a], X[b], X[x], X[y])
        if min(d, 2 * math.pi - d) <= tolerances.ZERO_DIHEDRAL:
            raise ZeroDihedral(f"edge {(a, b)} is folded flat (dihedral {d:.3e})")
        delta[e] = d
    return ExtractedAngles(sigma, delta, ell)


def _third_vertex(face, a, b) -> int:
    return next(v for v in face if v != a and v != b)


def flat_edges(delta, tol: float | None = None) -> list[int]:
    """Edge ids whose dihedral angle is pi within ``tol``."""
    tol = tolerances.FLAT_DIHEDRAL if tol is None else tol
    return [e for e, d in enumerate(np.asarray(delta)) if abs(d - math.pi) <= tol]


def cone_vectors(P: PolyhedronEmbedding, k: int) -> np.ndarray:
    """Edge vectors from vertex k to its neighbours, in link order."""
    return P.coords[list(P.K.links[k])] - P.coords[k]


def in_general_position(P: PolyhedronEmbedding, tol: float | None = None) -> bool:
    """Whether every vertex cone has linearly independent edge triples."""
    try:
        for k in range(P.K.V):
            check_general_position(cone_vectors(P, k), tol)
    except NotInGeneralPosition:
        return False
    return True


# ---------------------------------------------------------------------------
# rigid motions and comparison


def rigid_motion_from_point_triples(source, target, tol: float = 1e-9) -> RigidMotion:
    """Orientation-preserving motion taking three points onto three points.

    Three points carry no handedness in space: a congruent triple, mirrored
    or not, is always reached by a proper motion (a mirror image is also a
    half-turn about an axis in its plane), so only congruence is checked.
    """
    src = np.asarray(source, dtype=float).reshape(3, 3)
    dst = np.asarray(target, dtype=float).reshape(3, 3)
    size = max(1.0, float(np.max(np.abs(src))), float(np.max(np.abs(dst))))
    for name, tri in (("source", src), ("target", dst)):
        side = max(np.linalg.norm(tri[1] - tri[0]), np.linalg.norm(tri[2] - tri[0]),
                   np.linalg.norm(tri[2] - tri[1]))
        twice_area = np.linalg.norm(np.cross(tri[1] - tri[0], tri[2] - tri[0]))
        if side == 0 or twice_area <= tol * side ** 2:
            raise Collinear(f"{name} points are collinear")
    d_src = [np.linalg.norm(src[p] - src[q]) for p, q in ((0, 1), (1, 2), (2, 0))]
    d_dst = [np.linalg.norm(dst[p] - dst[q]) for p, q in ((0, 1), (1, 2), (2, 0))]
    if max(abs(a - b) for a, b in zip(d_src, d_dst)) > tol * size:
        raise NotCongruent(f"side lengths {d_src} vs {d_dst}")
    return fit_motion(src, dst)


class Comparison(NamedTuple):
    ok: bool
    scale: float
    residual: float


def similarity_compare(P1: PolyhedronEmbedding, P2: PolyhedronEmbedding,
                       rel_tol: float = 1e-6) -> Comparison:
    """Best orientation-preserving similarity taking P1 onto P2.

    ``ok`` iff the largest vertex deviation is at most ``rel_tol`` times
    the diameter of P2. ``residual`` is that deviation.
    """
    if P1.K != P2.K:
        raise CombinatoricMismatch("embeddings have different combinatorics")
    motion = fit_motion(P1.coords, P2.coords, with_scale=True)
    dev = float(np.max(np.linalg.norm(motion(P1.coords) - P2.coords, axis=1)))
    return Comparison(dev <= rel_tol * P2.diameter, motion.scale, dev)


# ---------------------------------------------------------------------------
# reconstruction


@dataclass(frozen=True)
class AttachStep:
    vertex: int
    shared_faces: int
    strip_deviation: float
    closure_deviation: float


@dataclass(frozen=True)
class Reconstruction:
    embedding: PolyhedronEmbedding
    order: tuple[int, ...]
    steps: tuple[AttachStep, ...]
    angle_error: float


def reconstruct(K: Combinatoric, sigma, delta, tol: float | None = None,
                base_edge=None) -> PolyhedronEmbedding:
    """Polyhedron with face angles ``sigma`` and dihedral angles ``delta``.

    The base edge gets length 1 and the first vertex of the growth order
    sits at the origin with its first cone edge along +z.
    """
    return reconstruct_with_report(K, sigma, delta, tol, base_edge).embedding


def reconstruct_with_report(K: Combinatoric, sigma, delta, tol: float | None = None,
                            base_edge=None) -> Reconstruction:
    """:func:`reconstruct` plus per-vertex attachment diagnostics."""
    from .moduli import check_membership

    tol = tolerances.RESIDUAL if tol is None else tol
    if genus(K) != 0:
        raise GenusNotZero("reconstruction needs a combinatoric sphere")
    sigma = np.asarray(sigma, dtype=float)
    delta = np.asarray(delta, dtype=float)
    mem = check_membership(K, sigma, delta, tol, base_edge=base_edge)
    if not mem.member:
        raise NotAMember(mem.reason)
    point = mem.point
    ell = point.ell
    closure_tol = tolerances.CLOSURE_FACTOR * tol
    order = disc_growth_order(K)
    index = cone_index(K)

    X = np.full((K.V, 3), np.nan)
    placed = np.zeros(K.V, dtype=bool)
    steps = []
    for step, k in enumerate(order):
        link = K.links[k]
        edges = index[k][1]
        u = realize_cone(cone_angles_at(K, k, sigma, delta), point.charts[k])
        local = np.vstack([np.zeros(3), ell[edges][:, None] * u])
        if step == 0:
            motion = RigidMotion(np.eye(3), np.zeros(3))
            strip_dev, n_shared = 0.0, 0
        else:
            if not placed[k]:
                raise ClosureFailure(f"vertex {k} is not on the built surface", vertex=k)
            fan = K.star_faces[k]
            shared = [p for p in range(len(fan)) if all(placed[v] for v in K.faces[fan[p]])]
            strip = sorted({p for q in shared for p in (q, (q + 1) % len(link))})
            src = local[[0] + [p + 1 for p in strip]]
            dst = X[[k] + [link[p] for p in strip]]
            motion = fit_motion(src, dst)
            strip_dev = float(np.max(np.linalg.norm(motion(src) - dst, axis=1)))
            n_shared = len(shared)
            if strip_dev > closure_tol:
                raise ClosureFailure(f"shared strip of vertex {k} deviates by {strip_dev:.3e}",
                                     vertex=k, deviation=strip_dev)
        world = motion(local)
        if step == 0:
            X[k] = world[0]
            placed[k] = True
        closure = 0.0
        for p, v in enumerate(link):
            if placed[v]:
                closure = max(closure, float(np.linalg.norm(world[p + 1] - X[v])))
            else:
                X[v] = world[p + 1]
                placed[v] = True
        if closure > closure_tol:
            raise ClosureFailure(f"cone of vertex {k} does not close up "
                                 f"(deviation {closure:.3e})", vertex=k, deviation=closure)
        steps.append(AttachStep(k, n_shared, strip_dev, closure))

    P = PolyhedronEmbedding(K, X)
    got = extract_angles(P)
    err = max(float(np.max(np.abs(got.sigma - sigma))),
              float(np.max(np.abs(wrap_pi(got.delta - delta)))))
    if err > 10 * tol:
        raise ClosureFailure(f"rebuilt angles differ from the input by {err:.3e}",
                             deviation=err)
    return Reconstruction(P, tuple(order), tuple(steps), err)


# ---------------------------------------------------------------------------
# OBJ subset


def parse_obj(text: str, path=None) -> PolyhedronEmbedding:
    """``v x y z`` and ``f i j k`` lines (1-based, triangles only).

    Other OBJ statements (normals, groups, materials) are ignored; index
    tokens of the form ``i/t/n`` use the vertex index.
    """
    verts, faces = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0] == "v":
                if len(tok) < 4:
                    raise FormatError("vertex needs three coordinates", path, lineno)
                verts.append([float(t) for t in tok[1:4]])
            elif tok[0] == "f":
                if len(tok) != 4:
                    raise FormatError(f"only triangles are supported, got {len(tok) - 1} indices",
                                      path, lineno)
                idx = [int(t.split("/")[0]) for t in tok[1:]]
                if any(i < 1 for i in idx):
                    raise FormatError("face indices are 1-based and positive", path, lineno)
                faces.append(tuple(i - 1 for i in idx))
        except ValueError as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(f"malformed number in {line!r}", path, lineno) from None
    if any(i >= len(verts) for f in faces for i in f):
        raise FormatError("face refers to a missing vertex", path)
    K = build_complex(faces, vertex_count=len(verts))
    return PolyhedronEmbedding(K, np.array(verts, dtype=float).reshape(-1, 3))


def read_obj(path) -> PolyhedronEmbedding:
    with open(path) as fh:
        return parse_obj(fh.read(), path=path)


def format_obj(P: PolyhedronEmbedding) -> str:
    lines = [f"v {x:.17g} {y:.17g} {z:.17g}" for x, y, z in P.coords]
    lines += [f"f {i + 1} {j + 1} {k + 1}" for i, j, k in P.K.faces]
    return "\n".join(lines) + "\n"


def write_obj(P: PolyhedronEmbedding, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_obj(P))
