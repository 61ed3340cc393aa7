"""Colorings of the dual graph: corners plus arrows on dual edges.

Dual two-cells are the vertices of K, dual nodes its faces and dual edges
its edges. A dual corner is a (cell, node) pair: the face ``node`` seen
from inside the cell of the vertex ``cell``. An arrow on a dual edge points
out of one of the two cells that the edge separates.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .complex import DualGraph
from .errors import ArgumentMismatch, ForeignSimplex, FormatError


@dataclass(frozen=True)
class DualColoring:
    """``corners``: set of (cell, node); ``arrows``: edge id -> cell it leaves."""

    corners: frozenset = field(default_factory=frozenset)
    arrows: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "corners", frozenset(tuple(c) for c in self.corners))
        object.__setattr__(self, "arrows", dict(self.arrows))

    def color_counts(self, D: DualGraph) -> list[int]:
        """Outward arrows plus colored corners, per two-cell."""
        _check_foreign(D, self)
        counts = [0] * len(D.two_cells)
        for cell, _node in self.corners:
            counts[cell] += 1
        for cell in self.arrows.values():
            counts[cell] += 1
        return counts

    def uncolored_edges(self, D: DualGraph) -> list[int]:
        return [e for e in range(len(D.edges)) if e not in self.arrows]


def _check_foreign(D: DualGraph, col: DualColoring) -> None:
    for e, cell in col.arrows.items():
        if not 0 <= e < len(D.edges):
            raise ForeignSimplex(f"arrow on unknown dual edge {e}")
        if cell not in D.edge_cells[e]:
            raise ForeignSimplex(f"arrow on dual edge {e} leaves cell {cell}, "
                                 f"which the edge does not bound")
    for cell, node in col.corners:
        if not 0 <= cell < len(D.two_cells) or node not in D.two_cells[cell]:
            raise ForeignSimplex(f"corner ({cell}, {node}) is not a corner of the dual graph")


def is_admissible(D: DualGraph, col: DualColoring) -> bool:
    """Every two-cell carries exactly three colors."""
    return all(c == 3 for c in col.color_counts(D))


def _cells_of_node(D: DualGraph) -> list[list[int]]:
    out = [[] for _ in range(D.node_count)]
    for cell, nodes in enumerate(D.two_cells):
        for node in nodes:
            out[node].append(cell)
    return out


def _edge_order(D: DualGraph, start: tuple[int, ...]) -> list[int]:
    """Dual edges in breadth-first discovery order from the start nodes."""
    incident = [[] for _ in range(D.node_count)]
    for e, (a, b) in enumerate(D.edges):
        incident[a].append(e)
        incident[b].append(e)
    seen_nodes = set(start)
    queue = deque(start)
    order, seen_edges = [], set()
    while queue:
        node = queue.popleft()
        for e in incident[node]:
            if e not in seen_edges:
                seen_edges.add(e)
                order.append(e)
            other = D.edges[e][0] if D.edges[e][1] == node else D.edges[e][1]
            if other not in seen_nodes:
                seen_nodes.add(other)
                queue.append(other)
    order += [e for e in range(len(D.edges)) if e not in seen_edges]
    return order


def find_epc_coloring(D: DualGraph, g: int, adjacent_pair=None) -> DualColoring | None:
    """Search for an admissible coloring of the elimination-pattern shape.

    Genus 0: all corners of the two adjacent nodes in ``adjacent_pair``
    (default: the two faces of edge 0) plus one arrow on every dual edge.
    Genus g >= 1: no corners and arrows on all but 6g - 6 dual edges.
    Returns None when the backtracking search is exhausted.
    """
    if g < 0:
        raise ArgumentMismatch(f"genus must be non-negative, got {g}")
    n_cells = len(D.two_cells)
    need = [3] * n_cells
    corners = set()
    if g == 0:
        pair = tuple(D.edges[0]) if adjacent_pair is None else tuple(adjacent_pair)
        if len(pair) != 2 or not all(0 <= x < D.node_count for x in pair) \
                or not D.adjacent(*pair):
            raise ArgumentMismatch(f"{pair} is not a pair of adjacent dual nodes")
        cells_of = _cells_of_node(D)
        for node in pair:
            for cell in cells_of[node]:
                corners.add((cell, node))
                need[cell] -= 1
        free_budget = 0
        start = pair
    else:
        if adjacent_pair is not None:
            raise ArgumentMismatch("adjacent_pair only applies to genus 0")
        free_budget = 6 * g - 6
        start = (0,)
    order = _edge_order(D, start)
    remaining = [len(D.cell_edges[c]) for c in range(n_cells)]
    arrows: dict[int, int] = {}

    def feasible(cell: int) -> bool:
        return 0 <= need[cell] <= remaining[cell]

    def search(pos: int, budget: int) -> bool:
        if pos == len(order):
            return all(x == 0 for x in need)
        e = order[pos]
        a, b = D.edge_cells[e]
        remaining[a] -= 1
        remaining[b] -= 1
        for out in (a, b):
            need[out] -= 1
            if feasible(a) and feasible(b):
                arrows[e] = out
                if search(pos + 1, budget):
                    return True
                del arrows[e]
            need[out] += 1
        if budget > 0 and feasible(a) and feasible(b):
            if search(pos + 1, budget - 1):
                return True
        remaining[a] += 1
        remaining[b] += 1
        return False

    if any(not feasible(c) for c in range(n_cells)):
        return None
    if not search(0, free_budget):
        return None
    return DualColoring(frozenset(corners), dict(arrows))


# ---------------------------------------------------------------------------
# text report


def format_coloring(D: DualGraph, col: DualColoring) -> str:
    """``arrow e -> cell`` lines (cell the arrow points into), then
    ``corner cell a b c`` lines with b the corner node and a, c its
    neighbours around the cell."""
    lines = []
    for e in sorted(col.arrows):
        a, b = D.edge_cells[e]
        head = b if col.arrows[e] == a else a
        lines.append(f"arrow {e} -> {head}")
    for cell, node in sorted(col.corners):
        ring = D.two_cells[cell]
        p = ring.index(node)
        lines.append(f"corner {cell} {ring[p - 1]} {node} {ring[(p + 1) % len(ring)]}")
    return "\n".join(lines) + "\n"


def parse_coloring(D: DualGraph, text: str, path=None) -> DualColoring:
    corners, arrows = set(), {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0] == "arrow" and len(tok) == 4 and tok[2] == "->":
                e, head = int(tok[1]), int(tok[3])
                if not 0 <= e < len(D.edges) or head not in D.edge_cells[e]:
                    raise FormatError(f"arrow {e} -> {head} does not fit the dual graph",
                                      path, lineno)
                a, b = D.edge_cells[e]
                arrows[e] = b if head == a else a
            elif tok[0] == "corner" and len(tok) == 5:
                corners.add((int(tok[1]), int(tok[3])))
            else:
                raise FormatError(f"unrecognised line {line!r}", path, lineno)
        except ValueError as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(f"non-integer field in {line!r}", path, lineno) from None
    return DualColoring(frozenset(corners), arrows)
