"""Oriented closed surface complexes ("combinatorics") and their dual graphs.

A :class:`Combinatoric` is built from oriented vertex triples and carries
every derived structure the rest of the package indexes into:

* ``edges``: sorted vertex pairs, lexicographically ordered; an edge id is a
  position in this tuple.
* ``corners``: three per face, ``corners[3 * f + p]`` is the corner of face
  ``f`` centred at ``faces[f][p]``.
* ``links``: for every vertex the cyclic order of its neighbours induced by
  the orientation, starting at the smallest neighbour.

Angle and length vectors elsewhere in the package are plain numpy arrays
indexed by corner id or edge id.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from .errors import (
    DisconnectedComplex,
    FormatError,
    GenusNotZero,
    InconsistentOrientation,
    InvalidComplex,
    NonManifoldEdge,
    PinchedVertex,
    SearchExhausted,
)

Edge = tuple[int, int]
Face = tuple[int, int, int]


class Corner(NamedTuple):
    """Face angle label: ``center`` vertex with unordered ``wings``."""

    center: int
    wings: tuple[int, int]


def edge_key(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True, eq=False)
class Combinatoric:
    vertex_count: int
    faces: tuple[Face, ...]
    edges: tuple[Edge, ...]
    corners: tuple[Corner, ...]
    links: tuple[tuple[int, ...], ...]
    # (face with a->b, face with b->a) for edge (a, b), a < b
    edge_faces: tuple[tuple[int, int], ...]
    _edge_index: dict = field(repr=False)
    _corner_index: dict = field(repr=False)

    @property
    def V(self) -> int:
        return self.vertex_count

    @property
    def E(self) -> int:
        return len(self.edges)

    @property
    def F(self) -> int:
        return len(self.faces)

    def edge_id(self, a: int, b: int) -> int:
        return self._edge_index[edge_key(a, b)]

    def corner_id(self, center: int, a: int, b: int) -> int:
        return self._corner_index[(center, edge_key(a, b))]

    def valency(self, k: int) -> int:
        return len(self.links[k])

    def face_of_corner(self, corner_id: int) -> int:
        return corner_id // 3

    def face_edges(self, f: int) -> tuple[int, int, int]:
        """Edge ids of face ``(i, j, k)`` in the order ij, jk, ki."""
        i, j, k = self.faces[f]
        return (self.edge_id(i, j), self.edge_id(j, k), self.edge_id(k, i))

    @cached_property
    def star_faces(self) -> tuple[tuple[int, ...], ...]:
        """Faces around each vertex, ordered like ``links``.

        Entry ``p`` of ``star_faces[k]`` is the face spanned by ``k``,
        ``links[k][p]`` and ``links[k][p + 1]``.
        """
        out = []
        for k in range(self.vertex_count):
            link = self.links[k]
            n = len(link)
            out.append(tuple(
                self._oriented_face[(k, link[p], link[(p + 1) % n])]
                for p in range(n)
            ))
        return tuple(out)

    @cached_property
    def _oriented_face(self) -> dict:
        table = {}
        for f, (i, j, k) in enumerate(self.faces):
            for rot in ((i, j, k), (j, k, i), (k, i, j)):
                table[rot] = f
        return table

    @cached_property
    def face_neighbors(self) -> tuple[tuple[int, int, int], ...]:
        """Faces across edges ij, jk, ki of each face."""
        out = []
        for f in range(self.F):
            nbrs = []
            for e in self.face_edges(f):
                f0, f1 = self.edge_faces[e]
                nbrs.append(f1 if f0 == f else f0)
            out.append(tuple(nbrs))
        return tuple(out)

    def __eq__(self, other):
        if not isinstance(other, Combinatoric):
            return NotImplemented
        return self.vertex_count == other.vertex_count and self.faces == other.faces

    def __hash__(self):
        return hash((self.vertex_count, self.faces))


def build_complex(faces: Iterable[Sequence[int]], vertex_count: int | None = None) -> Combinatoric:
    """Validate oriented triangles and derive edges, corners and links.

    Raises NonManifoldEdge, InconsistentOrientation, PinchedVertex or
    DisconnectedComplex (checked in that order), or InvalidComplex for
    malformed input.
    """
    faces = tuple(tuple(int(x) for x in f) for f in faces)
    if len(faces) < 4:
        raise InvalidComplex(f"need at least 4 faces, got {len(faces)}")
    for f in faces:
        if len(f) != 3:
            raise InvalidComplex(f"face {f} is not a triangle")
        if min(f) < 0:
            raise InvalidComplex(f"face {f} has a negative index")
        if len(set(f)) != 3:
            raise InvalidComplex(f"face {f} repeats a vertex")
    used = {v for f in faces for v in f}
    n = max(used) + 1 if vertex_count is None else int(vertex_count)
    if max(used) >= n:
        raise InvalidComplex(f"vertex index {max(used)} >= vertex_count {n}")
    if n < 4:
        raise InvalidComplex("a closed surface complex needs at least 4 vertices")
    if len(used) != n:
        missing = sorted(set(range(n)) - used)
        raise DisconnectedComplex(f"vertices {missing} lie in no face")
    if len({frozenset(f) for f in faces}) != len(faces):
        raise NonManifoldEdge("duplicate face")

    directed: dict[Edge, int] = {}
    undirected: dict[Edge, list[int]] = {}
    for fi, (i, j, k) in enumerate(faces):
        for a, b in ((i, j), (j, k), (k, i)):
            undirected.setdefault(edge_key(a, b), []).append(fi)
    for e, fs in undirected.items():
        if len(fs) != 2:
            raise NonManifoldEdge(f"edge {e} lies in {len(fs)} faces")
    for fi, (i, j, k) in enumerate(faces):
        for a, b in ((i, j), (j, k), (k, i)):
            if (a, b) in directed:
                raise InconsistentOrientation(
                    f"directed edge ({a}, {b}) appears in faces {directed[(a, b)]} and {fi}"
                )
            directed[(a, b)] = fi

    # link of k: face (k, a, b) contributes a -> b
    succ: list[dict[int, int]] = [dict() for _ in range(n)]
    for i, j, k in faces:
        succ[i][j] = k
        succ[j][k] = i
        succ[k][i] = j
    links = []
    for v in range(n):
        nxt = succ[v]
        start = min(nxt)
        cycle = [start]
        cur = nxt[start]
        while cur != start:
            cycle.append(cur)
            cur = nxt[cur]
        if len(cycle) != len(nxt):
            raise PinchedVertex(f"link of vertex {v} is not a single cycle")
        links.append(tuple(cycle))

    # face adjacency connectivity
    seen = {0}
    queue = deque([0])
    while queue:
        f = queue.popleft()
        i, j, k = faces[f]
        for a, b in ((i, j), (j, k), (k, i)):
            g = directed[(b, a)]
            if g not in seen:
                seen.add(g)
                queue.append(g)
    if len(seen) != len(faces):
        raise DisconnectedComplex("face adjacency graph is disconnected")

    edges = tuple(sorted(undirected))
    edge_index = {e: idx for idx, e in enumerate(edges)}
    edge_faces = tuple((directed[(a, b)], directed[(b, a)]) for a, b in edges)
    corners = []
    for i, j, k in faces:
        corners.append(Corner(i, edge_key(j, k)))
        corners.append(Corner(j, edge_key(k, i)))
        corners.append(Corner(k, edge_key(i, j)))
    corner_index = {(c.center, c.wings): idx for idx, c in enumerate(corners)}
    return Combinatoric(
        vertex_count=n,
        faces=faces,
        edges=edges,
        corners=tuple(corners),
        links=tuple(links),
        edge_faces=edge_faces,
        _edge_index=edge_index,
        _corner_index=corner_index,
    )


def genus(K: Combinatoric) -> int:
    chi = K.V - K.E + K.F
    return (2 - chi) // 2


def euler_characteristic(K: Combinatoric) -> int:
    return K.V - K.E + K.F


def vertex_link(K: Combinatoric, k: int) -> tuple[int, ...]:
    return K.links[k]


# ---------------------------------------------------------------------------
# dual graph


@dataclass(frozen=True)
class DualGraph:
    """Trivalent dual of a combinatoric.

    Nodes are face ids. Dual edge ``e`` joins the two faces of edge ``e`` of
    the primal complex; two-cell ``k`` is the circuit of faces around vertex
    ``k``, in the cyclic order of ``vertex_link``.
    """

    node_count: int
    edges: tuple[tuple[int, int], ...]
    two_cells: tuple[tuple[int, ...], ...]
    # dual edge ids on each two-cell boundary; cell_edges[k][p] is the edge
    # {k, links[k][p]}, which sits between two_cells[k][p - 1] and two_cells[k][p]
    cell_edges: tuple[tuple[int, ...], ...]
    # the two cells containing each dual edge (= endpoints of the primal edge)
    edge_cells: tuple[tuple[int, int], ...]

    def node_degree(self, node: int) -> int:
        return sum(node in e for e in self.edges)

    def adjacent(self, a: int, b: int) -> bool:
        return self.edge_between(a, b) is not None

    def edge_between(self, a: int, b: int) -> int | None:
        for idx, (x, y) in enumerate(self.edges):
            if {x, y} == {a, b}:
                return idx
        return None


def dual_graph(K: Combinatoric) -> DualGraph:
    edges = tuple(tuple(sorted(fs)) for fs in K.edge_faces)
    cells = K.star_faces
    cell_edges = tuple(
        tuple(K.edge_id(k, y) for y in K.links[k]) for k in range(K.V)
    )
    return DualGraph(
        node_count=K.F,
        edges=edges,
        two_cells=cells,
        cell_edges=cell_edges,
        edge_cells=K.edges,
    )


# ---------------------------------------------------------------------------
# disc growth


def face_set_is_disc(K: Combinatoric, faces: set[int]) -> bool:
    """True iff the closed sub-complex spanned by ``faces`` is a disc.

    Requires a connected manifold-with-boundary with Euler characteristic 1.
    """
    if not faces:
        return False
    # every vertex sees its faces as a single arc (or the full fan)
    verts = {v for f in faces for v in K.faces[f]}
    for v in verts:
        fan = K.star_faces[v]
        inside = [f in faces for f in fan]
        if all(inside):
            continue
        runs = sum(1 for p in range(len(fan)) if inside[p] and not inside[p - 1])
        if runs != 1:
            return False
    edges = {e for f in faces for e in K.face_edges(f)}
    if len(verts) - len(edges) + len(faces) != 1:
        return False
    return _faces_connected(K, faces)


def _faces_connected(K: Combinatoric, faces: set[int]) -> bool:
    start = next(iter(faces))
    seen = {start}
    stack = [start]
    while stack:
        f = stack.pop()
        for g in K.face_neighbors[f]:
            if g in faces and g not in seen:
                seen.add(g)
                stack.append(g)
    return len(seen) == len(faces)


def boundary_vertices(K: Combinatoric, faces: set[int]) -> set[int]:
    out = set()
    for f in faces:
        for e in K.face_edges(f):
            f0, f1 = K.edge_faces[e]
            if (f0 in faces) != (f1 in faces):
                out.update(K.edges[e])
    return out


def shared_arc(K: Combinatoric, k: int, faces: set[int]) -> list[int] | None:
    """Faces of the star of ``k`` already in ``faces``, as one consecutive arc.

    Returned in link order starting at the first face of the arc; None if
    the shared faces are empty or split into several arcs.
    """
    fan = K.star_faces[k]
    n = len(fan)
    inside = [f in faces for f in fan]
    if not any(inside):
        return None
    if all(inside):
        return list(fan)
    starts = [p for p in range(n) if inside[p] and not inside[p - 1]]
    if len(starts) != 1:
        return None
    p = starts[0]
    arc = []
    while inside[p % n]:
        arc.append(fan[p % n])
        p += 1
    return arc


def disc_growth_order(K: Combinatoric) -> list[int]:
    """Vertex order whose closed-star unions grow as discs until they cover K.

    Greedy over boundary vertices (smallest index first) with backtracking.
    Vertices left over once every face is covered are appended ascending.
    """
    if genus(K) != 0:
        raise GenusNotZero(f"disc growth needs a sphere, genus is {genus(K)}")
    all_faces = K.F

    def grow(order: list[int], covered: set[int]) -> list[int] | None:
        if len(covered) == all_faces:
            rest = sorted(set(range(K.V)) - set(order))
            return order + rest
        chosen = set(order)
        for v in sorted(boundary_vertices(K, covered) - chosen):
            if shared_arc(K, v, covered) is None:
                continue
            new = covered | set(K.star_faces[v])
            if len(new) != all_faces and not face_set_is_disc(K, new):
                continue
            found = grow(order + [v], new)
            if found is not None:
                return found
        return None

    for first in range(K.V):
        found = grow([first], set(K.star_faces[first]))
        if found is not None:
            return found
    raise SearchExhausted("no disc growth order found on a genus-0 complex")


# ---------------------------------------------------------------------------
# text format


def read_complex(path) -> Combinatoric:
    with open(path) as fh:
        return parse_complex(fh.read(), path=path)


def parse_complex(text: str, path=None) -> Combinatoric:
    header = None
    faces = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if header is None:
            if tok[0] != "complex" or len(tok) != 3:
                raise FormatError("expected header 'complex V F'", path, lineno)
            try:
                header = (int(tok[1]), int(tok[2]))
            except ValueError:
                raise FormatError("non-integer header field", path, lineno) from None
            continue
        if tok[0] != "f" or len(tok) != 4:
            raise FormatError(f"expected 'f i j k', got {line!r}", path, lineno)
        try:
            faces.append(tuple(int(x) for x in tok[1:]))
        except ValueError:
            raise FormatError(f"non-integer index in {line!r}", path, lineno) from None
    if header is None:
        raise FormatError("missing 'complex V F' header", path)
    if len(faces) != header[1]:
        raise FormatError(f"header announces {header[1]} faces, found {len(faces)}", path)
    return build_complex(faces, vertex_count=header[0])


def format_complex(K: Combinatoric) -> str:
    lines = [f"complex {K.V} {K.F}"]
    lines += [f"f {i} {j} {k}" for i, j, k in K.faces]
    return "\n".join(lines) + "\n"


def write_complex(K: Combinatoric, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_complex(K))
