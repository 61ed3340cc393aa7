"""The combined system: intrinsic rows stacked over all vertex cone rows.

Unknowns are ordered ell (E), sigma (3F), delta (E), then the per-vertex
charts in ascending vertex order. Residual rows are the 3F intrinsic rows
followed by each vertex's cone rows.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import tolerances
from .complex import Combinatoric, dual_graph, genus
from .cones import (
    ConeChart,
    chart_offsets,
    charts_from_vector,
    charts_vector,
    cone_angles_at,
    g_le,
    g_n,
    jac_g_le,
    jac_g_n,
    lift_all,
    lift_cone,
)
from .errors import (
    DegenerateCone,
    FacesNotAdjacent,
    FormatError,
    MissingChart,
    MissingEntry,
    NonFiniteMatrix,
    NotASolution,
)
from .intrinsic import check_in_membership, g_in, jac_g_in

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ModuliPoint:
    """A point (sigma, delta, charts, ell) of the lifted solution space."""

    sigma: np.ndarray
    delta: np.ndarray
    charts: tuple[ConeChart, ...]
    ell: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "sigma", np.asarray(self.sigma, dtype=float))
        object.__setattr__(self, "delta", np.asarray(self.delta, dtype=float))
        object.__setattr__(self, "ell", np.asarray(self.ell, dtype=float))
        object.__setattr__(self, "charts", tuple(self.charts))

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.ell, self.sigma, self.delta, charts_vector(self.charts)])

    @classmethod
    def from_vector(cls, K: Combinatoric, x, template: "ModuliPoint | None" = None) -> "ModuliPoint":
        x = np.asarray(x, dtype=float)
        E, C = K.E, 3 * K.F
        charts = charts_from_vector(K, x[2 * E + C:], template.charts if template else None)
        return cls(x[E:E + C], x[E + C:2 * E + C], charts, x[:E])


def _check_point(K: Combinatoric, point: ModuliPoint):
    if point.sigma.shape != (3 * K.F,):
        raise MissingEntry(f"sigma needs {3 * K.F} corner values")
    if point.delta.shape != (K.E,):
        raise MissingEntry(f"delta needs {K.E} edge values")
    if point.ell.shape != (K.E,):
        raise MissingEntry(f"ell needs {K.E} edge values")
    if len(point.charts) != K.V or any(ch is None for ch in point.charts):
        raise MissingChart(f"need one chart per vertex ({K.V})")


def g_full(K: Combinatoric, point: ModuliPoint) -> np.ndarray:
    """Intrinsic residual rows followed by the stacked cone rows."""
    _check_point(K, point)
    return np.concatenate([
        g_in(K, point.ell, point.sigma),
        g_le(K, point.sigma, point.delta, point.charts),
    ])


def default_dropped_faces(K: Combinatoric) -> tuple[int, int]:
    """The two faces across the lexicographically smallest edge."""
    return tuple(K.edge_faces[0])


def _face_id(K: Combinatoric, face) -> int:
    if isinstance(face, (int, np.integer)):
        if not 0 <= face < K.F:
            raise FacesNotAdjacent(f"face id {face} out of range")
        return int(face)
    key = frozenset(face)
    for f, tri in enumerate(K.faces):
        if frozenset(tri) == key:
            return f
    raise FacesNotAdjacent(f"{tuple(face)} is not a face of the complex")


def _dropped_rows(K: Combinatoric, dropped_faces) -> np.ndarray:
    if dropped_faces is None:
        dropped_faces = default_dropped_faces(K)
    shared_edge(K, dropped_faces)
    f, g = (_face_id(K, x) for x in dropped_faces)
    keep = np.ones(3 * K.F, dtype=bool)
    keep[3 * f:3 * f + 3] = False
    keep[3 * g:3 * g + 3] = False
    return keep


def shared_edge(K: Combinatoric, dropped_faces=None) -> int:
    """Edge id shared by the dropped face pair."""
    if dropped_faces is None:
        dropped_faces = default_dropped_faces(K)
    f, g = (_face_id(K, x) for x in dropped_faces)
    common = set(K.face_edges(f)) & set(K.face_edges(g))
    if f == g or len(common) != 1:
        raise FacesNotAdjacent(f"faces {K.faces[f]} and {K.faces[g]} share no edge")
    return common.pop()


def _reduced_mask(K: Combinatoric, dropped_faces) -> np.ndarray:
    keep = _dropped_rows(K, dropped_faces)
    cone_rows = sum(4 * K.valency(k) - 6 for k in range(K.V))
    return np.concatenate([keep, np.ones(cone_rows, dtype=bool)])


def g_full_reduced(K: Combinatoric, point: ModuliPoint, dropped_faces=None) -> np.ndarray:
    """:func:`g_full` without the six intrinsic rows of two adjacent faces.

    On a sphere the rows of the last two faces follow from the others.
    ``dropped_faces`` holds two face ids or vertex triples; the default is
    the pair across the lexicographically smallest edge.
    """
    mask = _reduced_mask(K, dropped_faces)
    return g_full(K, point)[mask]


def jac_g_full(K: Combinatoric, point: ModuliPoint, step: float | None = None) -> np.ndarray:
    """Jacobian of :func:`g_full`; intrinsic rows analytic, cone rows differenced."""
    _check_point(K, point)
    E, C = K.E, 3 * K.F
    n_chart = chart_offsets(K)[-1]
    Jin = jac_g_in(K, point.ell, point.sigma)
    Jle = jac_g_le(K, point.sigma, point.delta, point.charts, step)
    J = np.zeros((Jin.shape[0] + Jle.shape[0], 2 * E + C + n_chart))
    J[:Jin.shape[0], :E + C] = Jin
    J[Jin.shape[0]:, E:] = Jle
    return J


def jac_g_full_reduced(K: Combinatoric, point: ModuliPoint, dropped_faces=None,
                       step: float | None = None) -> np.ndarray:
    return jac_g_full(K, point, step)[_reduced_mask(K, dropped_faces)]


# ---------------------------------------------------------------------------
# membership


@dataclass
class Membership:
    member: bool
    point: ModuliPoint | None
    residuals: dict[str, float] = field(default_factory=dict)
    reason: str = ""

    def __bool__(self) -> bool:
        return self.member

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=math.inf)

    @property
    def failing_block(self) -> str | None:
        """Name of the block with the largest residual, if membership failed."""
        if self.member or not self.residuals:
            return None
        return max(self.residuals, key=self.residuals.get)


def check_membership(K: Combinatoric, sigma, delta, tol: float | None = None,
                     base_edge=None) -> Membership:
    """Whether (sigma, delta) are the angles of a polyhedron triangulated by K.

    Propagates lengths (base length 1), lifts every vertex cone and accepts
    when every residual block is within ``tol``; the intrinsic block uses
    the same ``tol * (1 + base_length)`` scaling as
    :func:`~polymoduli.intrinsic.check_in_membership`. On a sphere this is
    an exact test; on other surfaces it is only a necessary condition.
    Never raises for bad values: failures come back as ``member=False``
    with a reason.
    """
    tol = tolerances.RESIDUAL if tol is None else tol
    sigma = np.asarray(sigma, dtype=float)
    delta = np.asarray(delta, dtype=float)
    if sigma.shape != (3 * K.F,) or delta.shape != (K.E,):
        return Membership(False, None, {}, "wrong number of angle values")
    if not (np.all(np.isfinite(sigma)) and np.all(np.isfinite(delta))):
        return Membership(False, None, {}, "non-finite angle values")
    if np.any(delta <= 0) or np.any(delta >= TWO_PI):
        return Membership(False, None, {}, "dihedral angle outside (0, 2pi)")
    inside = check_in_membership(K, sigma, tol, base_edge=base_edge)
    residuals = {"intrinsic": inside.residual}
    if not inside.member:
        return Membership(False, None, residuals,
                          f"intrinsic residual {inside.residual:.3e} exceeds tolerance")
    charts = []
    for k in range(K.V):
        try:
            charts.append(lift_cone(cone_angles_at(K, k, sigma, delta)))
        except DegenerateCone as exc:
            residuals[f"cone {k}"] = math.inf
            return Membership(False, None, residuals, f"cone {k} cannot be lifted: {exc}")
    point = ModuliPoint(sigma, delta, tuple(charts), inside.ell)
    worst_cone = ("", 0.0)
    for k in range(K.V):
        r = float(np.max(np.abs(_cone_rows(K, k, point))))
        residuals[f"cone {k}"] = r
        if r > worst_cone[1]:
            worst_cone = (f"cone {k}", r)
    if worst_cone[1] > tol:
        return Membership(False, None, residuals,
                          f"{worst_cone[0]} residual {worst_cone[1]:.3e} exceeds tolerance")
    return Membership(True, point, residuals, "")


def _cone_rows(K: Combinatoric, k: int, point: ModuliPoint) -> np.ndarray:
    return g_n(cone_angles_at(K, k, point.sigma, point.delta), point.charts[k])


def lift_point(K: Combinatoric, sigma, delta, ell) -> ModuliPoint:
    """Assemble a ModuliPoint by lifting every cone of (sigma, delta)."""
    return ModuliPoint(sigma, delta, lift_all(K, sigma, delta), ell)


# ---------------------------------------------------------------------------
# numerical dimensions


@dataclass(frozen=True)
class NullityReport:
    nullity: int
    rank: int
    singular_values: np.ndarray
    threshold: float
    columns: int

    @property
    def gap(self) -> float:
        """Smallest kept singular value over the largest one counted as zero.

        Infinite when every computed singular value is kept; the remaining
        kernel then comes only from having more columns than rows.
        """
        s = self.singular_values
        kept = s[:self.rank]
        zero = s[self.rank:]
        if len(kept) == 0:
            return 0.0
        if len(zero) == 0 or zero[0] == 0:
            return math.inf
        return float(kept[-1] / zero[0])

    @property
    def margin(self) -> float:
        """Smallest kept singular value over the threshold."""
        if self.rank == 0:
            return 0.0
        return float(self.singular_values[self.rank - 1] / self.threshold) \
            if self.threshold > 0 else math.inf


def numeric_nullity(J, rel_threshold: float | None = None) -> NullityReport:
    """Dimension of the numerical kernel: columns minus numerical rank."""
    rel = tolerances.NULLITY_REL if rel_threshold is None else rel_threshold
    J = np.atleast_2d(np.asarray(J, dtype=float))
    if not np.all(np.isfinite(J)):
        raise NonFiniteMatrix("matrix has non-finite entries")
    s = np.linalg.svd(J, compute_uv=False) if J.size else np.zeros(0)
    smax = float(s[0]) if len(s) else 0.0
    thr = rel * smax
    rank = int(np.sum(s > thr)) if smax > 0 else 0
    return NullityReport(J.shape[1] - rank, rank, s, thr, J.shape[1])


@dataclass(frozen=True)
class DimensionCheck:
    name: str
    expected: int | None
    actual: int
    gap: float

    @property
    def ok(self) -> bool:
        return self.expected is None or self.expected == self.actual


@dataclass
class DimensionReport:
    V: int
    E: int
    F: int
    genus: int
    checks: list[DimensionCheck]
    scale_derivative: float
    coloring: object = None
    conditional: bool = False

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks) and self.scale_derivative < 1e-6

    def check(self, name: str) -> DimensionCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def format(self) -> str:
        lines = [f"dimension-report V={self.V} E={self.E} F={self.F} genus={self.genus}"]
        for c in self.checks:
            exp = "n/a" if c.expected is None else str(c.expected)
            verdict = "ok" if c.ok else "MISMATCH"
            lines.append(f"{c.name} expected={exp} actual={c.actual} gap={c.gap:.3e} {verdict}")
        lines.append(f"scale-direction derivative={self.scale_derivative:.3e} "
                     f"{'ok' if self.scale_derivative < 1e-6 else 'MISMATCH'}")
        if self.coloring is None:
            lines.append("epc-witness not-found (checks are formula comparisons only)")
        else:
            lines.append(f"epc-witness found arrows={len(self.coloring.arrows)} "
                         f"corners={len(self.coloring.corners)}")
        return "\n".join(lines) + "\n"


def _thread_count() -> int:
    raw = os.environ.get("POLYMODULI_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def verify_dimensions(K: Combinatoric, point: ModuliPoint, rel_threshold: float | None = None,
                      dropped_faces=None, search_coloring: bool = True) -> DimensionReport:
    """Compare numerical nullities at ``point`` with the dimension formulas.

    Checks, in order: the intrinsic system (E), every vertex cone
    (2n - 3), the stacked cone system (2E + 6g - 6), and on a sphere the
    full system (E), the reduced system (E) and its quotient by the scale
    direction (E - 1, computed by appending the scale direction as a row).

    The reduced system never mentions the length of the edge shared by the
    two dropped faces; that column is left out of its count, otherwise the
    free length adds one to the nullity.
    """
    res = float(np.max(np.abs(g_full(K, point))))
    if res > 1e-9:
        raise NotASolution(f"g_full residual {res:.3e} at the given point")
    g = genus(K)
    E, C = K.E, 3 * K.F
    checks = []

    def add(name, expected, J):
        rep = numeric_nullity(J, rel_threshold)
        checks.append(DimensionCheck(name, expected, rep.nullity, rep.gap))

    add("intrinsic", E, jac_g_in(K, point.ell, point.sigma))

    def cone_jac(k):
        return jac_g_n(cone_angles_at(K, k, point.sigma, point.delta), point.charts[k])

    threads = _thread_count()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            cone_jacs = list(pool.map(cone_jac, range(K.V)))
    else:
        cone_jacs = [cone_jac(k) for k in range(K.V)]
    for k, J in enumerate(cone_jacs):
        add(f"cone {k}", 2 * K.valency(k) - 3, J)

    add("cones-stacked", 2 * E + 6 * g - 6, jac_g_le(K, point.sigma, point.delta, point.charts))

    J_full = jac_g_full(K, point)
    scale = np.zeros(J_full.shape[1])
    scale[:E] = point.ell / np.linalg.norm(point.ell)
    scale_derivative = float(np.max(np.abs(J_full @ scale)))

    if g == 0:
        # the edge shared by the dropped faces occurs in no remaining row, so
        # its length column is removed before counting
        orphan = shared_edge(K, dropped_faces)
        J_red = np.delete(J_full[_reduced_mask(K, dropped_faces)], orphan, axis=1)
        add("full", E, J_full)
        add("full-reduced", E, J_red)
        add("moduli", E - 1, np.vstack([J_red, np.delete(scale, orphan)[None, :]]))
    else:
        add("full", None, J_full)

    coloring = None
    if search_coloring:
        from .coloring import find_epc_coloring

        coloring = find_epc_coloring(dual_graph(K), g)
    return DimensionReport(K.V, E, K.F, g, checks, scale_derivative, coloring,
                           conditional=coloring is None)


# ---------------------------------------------------------------------------
# angle files


def format_angles(K: Combinatoric, sigma, delta) -> str:
    """``angles V E F`` header, one ``s i j k value`` line per corner
    (centre j, face order) and one ``d i j value`` line per edge."""
    lines = [f"angles {K.V} {K.E} {K.F}"]
    for f, (i, j, k) in enumerate(K.faces):
        for p, (a, c, b) in enumerate(((k, i, j), (i, j, k), (j, k, i))):
            lines.append(f"s {a} {c} {b} {float(sigma[3 * f + p]):.17g}")
    for e, (i, j) in enumerate(K.edges):
        lines.append(f"d {i} {j} {float(delta[e]):.17g}")
    return "\n".join(lines) + "\n"


def write_angles(K: Combinatoric, sigma, delta, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_angles(K, sigma, delta))


def parse_angles(K: Combinatoric, text: str, path=None) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of :func:`format_angles`; every corner and edge must appear once."""
    sigma = np.full(3 * K.F, np.nan)
    delta = np.full(K.E, np.nan)
    header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if not header:
            if tok[0] != "angles" or len(tok) != 4:
                raise FormatError("expected header 'angles V E F'", path, lineno)
            if [int(t) for t in tok[1:]] != [K.V, K.E, K.F]:
                raise FormatError(f"header {tok[1:]} does not match the complex "
                                  f"({K.V} {K.E} {K.F})", path, lineno)
            header = True
            continue
        try:
            if tok[0] == "s" and len(tok) == 5:
                a, c, b = (int(t) for t in tok[1:4])
                idx = K.corner_id(c, a, b)
                target = sigma
            elif tok[0] == "d" and len(tok) == 4:
                idx = K.edge_id(int(tok[1]), int(tok[2]))
                target = delta
            else:
                raise FormatError(f"unrecognised line {line!r}", path, lineno)
            value = float(tok[-1])
        except KeyError:
            raise FormatError(f"{line!r} names a simplex not in the complex", path, lineno) from None
        except ValueError:
            raise FormatError(f"malformed number in {line!r}", path, lineno) from None
        if not np.isnan(target[idx]):
            raise FormatError(f"duplicate entry {line!r}", path, lineno)
        target[idx] = value
    if not header:
        raise FormatError("missing 'angles V E F' header", path)
    if np.isnan(sigma).any() or np.isnan(delta).any():
        missing = int(np.isnan(sigma).sum() + np.isnan(delta).sum())
        raise FormatError(f"{missing} angle values missing", path)
    return sigma, delta


def read_angles(K: Combinatoric, path) -> tuple[np.ndarray, np.ndarray]:
    with open(path) as fh:
        return parse_angles(K, fh.read(), path=path)


__all__ = [
    "ModuliPoint", "Membership", "NullityReport", "DimensionCheck", "DimensionReport",
    "g_full", "g_full_reduced", "shared_edge", "jac_g_full", "jac_g_full_reduced", "default_dropped_faces",
    "check_membership", "lift_point", "numeric_nullity", "verify_dimensions",
    "format_angles", "parse_angles", "read_angles", "write_angles",
]
