"""Polyhedral cones at a vertex, parametrized through their spherical polygon.

A cone with n edges meets the unit sphere in a polygon A_1..A_n. Face angle
``sigma[i]`` is the polygon side A_{i+1}A_{i+2} (0-based arrays, 1-based
polygon labels) and dihedral angle ``delta[i]`` is the polygon angle at
A_{i+1}. The polygon is fan-triangulated from A_1: triangle ``t`` has
vertices A_1, A_{t+2}, A_{t+3}, angles ``alpha[t]`` at A_1, ``gamma[t]`` at
A_{t+2}, ``beta[t]`` at A_{t+3}, and the diagonal A_1A_{t+3} has length
``c[t]`` (only for t < n - 3).

The dihedral assembly rows are compared modulo 2pi: a fan triangle whose
orientation disagrees with the polygon carries angles in (pi, 2pi), and its
contributions then add up correctly only modulo 2pi.

Local variable order for Jacobians: sigma (n), delta (n), alpha, beta,
gamma (n - 2 each), c (n - 3). Global order for the vertex system:
sigma over corner ids, delta over edge ids, then each vertex's chart
(alpha, beta, gamma, c) in ascending vertex order.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import tolerances
from .complex import Combinatoric
from .errors import (
    DegenerateCone,
    DegenerateSphericalTriangle,
    MissingChart,
    NotInGeneralPosition,
    SizeMismatch,
)
from .geometry import dihedral_angle, vector_angle, wrap_2pi, wrap_pi
from .sphere import Branch, angle_from_three_sides, g_three, side_from_two_sides_and_angle


@dataclass(frozen=True)
class ConeAngles:
    sigma: np.ndarray
    delta: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "sigma", np.asarray(self.sigma, dtype=float))
        object.__setattr__(self, "delta", np.asarray(self.delta, dtype=float))
        if self.sigma.shape != self.delta.shape or self.sigma.ndim != 1:
            raise SizeMismatch("sigma and delta must be 1-d arrays of equal length")
        if self.n < 3:
            raise SizeMismatch(f"a cone needs at least 3 edges, got {self.n}")

    @property
    def n(self) -> int:
        return len(self.sigma)


@dataclass(frozen=True)
class ConeChart:
    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    c: np.ndarray
    branch: tuple[Branch, ...] = ()

    @property
    def n(self) -> int:
        return len(self.alpha) + 2

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.alpha, self.beta, self.gamma, self.c])

    @classmethod
    def from_vector(cls, x, n: int, branch=()) -> "ConeChart":
        x = np.asarray(x, dtype=float)
        m = n - 2
        if x.shape != (chart_size(n),):
            raise SizeMismatch(f"chart of an {n}-cone has {chart_size(n)} entries")
        return cls(x[:m], x[m:2 * m], x[2 * m:3 * m], x[3 * m:], tuple(branch))


def chart_size(n: int) -> int:
    return 3 * (n - 2) + (n - 3)


def residual_size(n: int) -> int:
    return 3 * (n - 2) + n


def _triangle_sides(sigma, c):
    """Sides (a, b, c) of every fan triangle, as arrays over triangles."""
    n = len(sigma)
    a = sigma[1:n - 1]
    b = np.concatenate([sigma[:1], c])
    cc = np.concatenate([c, sigma[n - 1:]])
    return a, b, cc


def cone_residual(sigma, delta, alpha, beta, gamma, c) -> np.ndarray:
    n = len(sigma)
    a, b, cc = _triangle_sides(sigma, c)
    tri = g_three(a, b, cc, alpha, beta, gamma).T.reshape(-1)
    asm = np.empty(n)
    asm[0] = delta[0] - alpha.sum()
    asm[1] = delta[1] - gamma[0]
    if n > 3:
        asm[2:n - 1] = delta[2:n - 1] - beta[:n - 3] - gamma[1:n - 2]
    asm[n - 1] = delta[n - 1] - beta[n - 3]
    return np.concatenate([tri, wrap_pi(asm)])


def g_n(angles: ConeAngles, chart: ConeChart) -> np.ndarray:
    """Residual of length 3(n - 2) + n: fan triangle rows, then assembly rows."""
    n = angles.n
    if chart.n != n or len(chart.beta) != n - 2 or len(chart.gamma) != n - 2 \
            or len(chart.c) != n - 3:
        raise SizeMismatch(f"chart does not fit an {n}-cone")
    return cone_residual(angles.sigma, angles.delta, np.asarray(chart.alpha),
                         np.asarray(chart.beta), np.asarray(chart.gamma),
                         np.asarray(chart.c))


def _split_local(x, n):
    m = n - 2
    o = 2 * n
    return (x[:n], x[n:o], x[o:o + m], x[o + m:o + 2 * m], x[o + 2 * m:o + 3 * m],
            x[o + 3 * m:])


def local_vector(angles: ConeAngles, chart: ConeChart) -> np.ndarray:
    return np.concatenate([angles.sigma, angles.delta, chart.as_vector()])


def g_n_flat(x, n: int) -> np.ndarray:
    return cone_residual(*_split_local(np.asarray(x, dtype=float), n))


def central_jacobian(fun, x, step: float | None = None) -> np.ndarray:
    """Central finite-difference Jacobian of ``fun`` at ``x``."""
    step = tolerances.FD_STEP if step is None else step
    x = np.asarray(x, dtype=float)
    f0 = np.asarray(fun(x))
    J = np.empty((f0.size, x.size))
    for j in range(x.size):
        xp = x.copy()
        xm = x.copy()
        xp[j] += step
        xm[j] -= step
        J[:, j] = (np.asarray(fun(xp)) - np.asarray(fun(xm))) / (2 * step)
    return J


def jac_g_n(angles: ConeAngles, chart: ConeChart, step: float | None = None) -> np.ndarray:
    n = angles.n
    return central_jacobian(lambda x: g_n_flat(x, n), local_vector(angles, chart), step)


def lift_cone(angles: ConeAngles) -> ConeChart:
    """Recover the fan chart from (sigma, delta), triangle by triangle.

    The angle at A_{t+2} comes from the dihedral angles (delta[1] for the
    first triangle, delta[t+1] - beta[t-1] afterwards, taken mod 2pi); it
    fixes the triangle's branch and, with the two known sides, its third
    side and remaining angles. The first and last assembly rows and the last
    triangle's gamma row are left as consistency checks.
    """
    sigma, delta = angles.sigma, angles.delta
    n = angles.n
    if np.any(sigma <= 0) or np.any(sigma >= math.pi):
        raise DegenerateCone("face angles must lie in (0, pi)")
    alpha, beta, gamma, c, branches = [], [], [], [], []
    try:
        for t in range(n - 2):
            side_a = sigma[t + 1]
            side_b = sigma[0] if t == 0 else c[t - 1]
            if t == 0:
                g = float(delta[1])
            else:
                g = float(wrap_2pi(delta[t + 1] - beta[t - 1]))
            branch = Branch.of_angle(g)
            if t < n - 3:
                side_c = side_from_two_sides_and_angle(side_a, side_b, g)
                c.append(side_c)
            else:
                side_c = sigma[n - 1]
            alpha.append(angle_from_three_sides(side_a, side_b, side_c, branch))
            beta.append(angle_from_three_sides(side_b, side_c, side_a, branch))
            gamma.append(g)
            branches.append(branch)
    except DegenerateSphericalTriangle as exc:
        raise DegenerateCone(str(exc)) from exc
    return ConeChart(np.array(alpha), np.array(beta), np.array(gamma),
                     np.array(c, dtype=float), tuple(branches))


def check_cone_membership(angles: ConeAngles, tol: float | None = None) -> bool:
    tol = tolerances.RESIDUAL if tol is None else tol
    try:
        chart = lift_cone(angles)
    except DegenerateCone:
        return False
    return float(np.max(np.abs(g_n(angles, chart)))) <= tol


def check_general_position(vectors, tol: float | None = None) -> None:
    """Raise NotInGeneralPosition unless every triple of edges is independent."""
    tol = tolerances.GENERAL_POSITION if tol is None else tol
    u = np.asarray(vectors, dtype=float)
    u = u / np.linalg.norm(u, axis=1, keepdims=True)
    for i, j, k in itertools.combinations(range(len(u)), 3):
        det = float(np.dot(u[i], np.cross(u[j], u[k])))
        if abs(det) <= tol:
            raise NotInGeneralPosition(
                f"cone edges {i}, {j}, {k} are coplanar (det = {det:.3e})"
            )


def realize_cone(angles: ConeAngles, chart: ConeChart) -> np.ndarray:
    """Unit edge vectors u_1..u_n of a cone with the given angles.

    Gauge: u_1 is the north pole and u_2 lies in the x-z half-plane with
    x > 0. Vertex A_{t+3} sits at polar distance c[t] from u_1 (sigma[n-1]
    for the last one) and azimuth -(alpha[0] + ... + alpha[t]); the negative
    sense matches the orientation convention of :func:`dihedral_angle`.
    """
    sigma = angles.sigma
    n = angles.n
    polar = np.concatenate([[0.0, sigma[0]], chart.c, [sigma[n - 1]]])
    azimuth = np.concatenate([[0.0, 0.0], -np.cumsum(chart.alpha)])
    u = np.stack([
        np.sin(polar) * np.cos(azimuth),
        np.sin(polar) * np.sin(azimuth),
        np.cos(polar),
    ], axis=1)
    check_general_position(u)
    return u


def cone_angles_from_vectors(vectors) -> ConeAngles:
    """Face and dihedral angles of the cone spanned by cyclically ordered edges."""
    u = np.asarray(vectors, dtype=float)
    n = len(u)
    origin = np.zeros(3)
    sigma = [vector_angle(u[i], u[(i + 1) % n]) for i in range(n)]
    delta = [dihedral_angle(origin, u[i], u[(i + 1) % n], u[i - 1]) for i in range(n)]
    return ConeAngles(np.array(sigma), np.array(delta))


# ---------------------------------------------------------------------------
# all cones of a combinatoric


@lru_cache(maxsize=32)
def cone_index(K: Combinatoric):
    """Per-vertex (corner ids, edge ids) selecting sigma^k and delta^k."""
    out = []
    for k in range(K.V):
        link = K.links[k]
        n = len(link)
        corners = np.array([K.corner_id(k, link[p], link[(p + 1) % n]) for p in range(n)])
        edges = np.array([K.edge_id(k, y) for y in link])
        out.append((corners, edges))
    return tuple(out)


def chart_offsets(K: Combinatoric) -> np.ndarray:
    """Start offset of each vertex's chart in the concatenated chart vector."""
    sizes = [chart_size(K.valency(k)) for k in range(K.V)]
    return np.concatenate([[0], np.cumsum(sizes)])


def cone_angles_at(K: Combinatoric, k: int, sigma, delta) -> ConeAngles:
    corners, edges = cone_index(K)[k]
    return ConeAngles(np.asarray(sigma)[corners], np.asarray(delta)[edges])


def lift_all(K: Combinatoric, sigma, delta) -> tuple[ConeChart, ...]:
    return tuple(lift_cone(cone_angles_at(K, k, sigma, delta)) for k in range(K.V))


def g_le(K: Combinatoric, sigma, delta, charts) -> np.ndarray:
    """Per-vertex cone residuals stacked in ascending vertex order."""
    if charts is None or len(charts) != K.V:
        raise MissingChart(f"need {K.V} charts, got {0 if charts is None else len(charts)}")
    parts = []
    for k in range(K.V):
        if charts[k] is None:
            raise MissingChart(f"no chart for vertex {k}")
        parts.append(g_n(cone_angles_at(K, k, sigma, delta), charts[k]))
    return np.concatenate(parts)


def charts_vector(charts) -> np.ndarray:
    return np.concatenate([ch.as_vector() for ch in charts])


def charts_from_vector(K: Combinatoric, x, template=None) -> tuple[ConeChart, ...]:
    off = chart_offsets(K)
    return tuple(
        ConeChart.from_vector(x[off[k]:off[k + 1]], K.valency(k),
                              template[k].branch if template is not None else ())
        for k in range(K.V)
    )


def jac_g_le(K: Combinatoric, sigma, delta, charts, step: float | None = None) -> np.ndarray:
    """Finite-difference Jacobian of :func:`g_le`.

    Columns: sigma (3F), delta (E), charts (vertex-major). Each vertex block
    only depends on its own variables, so blocks are differenced locally and
    scattered into place.
    """
    sizes = [residual_size(K.valency(k)) for k in range(K.V)]
    row_off = np.concatenate([[0], np.cumsum(sizes)])
    ch_off = chart_offsets(K)
    base = 3 * K.F + K.E
    J = np.zeros((row_off[-1], base + ch_off[-1]))
    for k in range(K.V):
        corners, edges = cone_index(K)[k]
        n = len(corners)
        local = jac_g_n(cone_angles_at(K, k, sigma, delta), charts[k], step)
        rows = slice(row_off[k], row_off[k + 1])
        for p in range(n):
            J[rows, corners[p]] += local[:, p]
            J[rows, 3 * K.F + edges[p]] += local[:, n + p]
        J[rows, base + ch_off[k]:base + ch_off[k + 1]] = local[:, 2 * n:]
    return J
